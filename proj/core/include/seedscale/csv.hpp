#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "seedscale/state_space.hpp"

namespace seedscale {

/// 17 significant digits, '.' decimal point; round-trips doubles exactly.
std::string format_real(double x);

/// Comma-separated writer with '#'-prefixed metadata lines. LF endings, UTF-8.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void metadata(const std::string& key, const std::string& value);
  void metadata(const std::string& key, double value);
  void metadata(const std::string& key, std::uint64_t value);

  void header(const std::vector<std::string>& columns);

  class RowBuilder {
   public:
    explicit RowBuilder(std::ostream& out) : out_(out) {}
    RowBuilder& field(const std::string& s);
    RowBuilder& field(double x);
    RowBuilder& field(std::int64_t x);
    RowBuilder& field(std::uint64_t x);
    void done();

   private:
    std::ostream& out_;
    bool first_ = true;
  };

  RowBuilder row() { return RowBuilder(out_); }

 private:
  std::ostream& out_;
};

/// Matrix dump: header row of state labels "n:m", row-major, 17 significant
/// digits, first column the row label.
void dump_matrix_csv(std::ostream& out, const StateSpace& space,
                     const Eigen::MatrixXd& entries);

}  // namespace seedscale

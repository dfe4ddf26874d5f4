#include "seedscale/csv.hpp"

#include <cstdio>

namespace seedscale {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void CsvWriter::metadata(const std::string& key, const std::string& value) {
  out_ << "# " << key << " = " << value << "\n";
}

void CsvWriter::metadata(const std::string& key, double value) {
  metadata(key, format_real(value));
}

void CsvWriter::metadata(const std::string& key, std::uint64_t value) {
  metadata(key, std::to_string(value));
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ",";
    out_ << columns[i];
  }
  out_ << "\n";
}

CsvWriter::RowBuilder& CsvWriter::RowBuilder::field(const std::string& s) {
  if (!first_) out_ << ",";
  first_ = false;
  out_ << s;
  return *this;
}

CsvWriter::RowBuilder& CsvWriter::RowBuilder::field(double x) {
  return field(format_real(x));
}

CsvWriter::RowBuilder& CsvWriter::RowBuilder::field(std::int64_t x) {
  return field(std::to_string(x));
}

CsvWriter::RowBuilder& CsvWriter::RowBuilder::field(std::uint64_t x) {
  return field(std::to_string(x));
}

void CsvWriter::RowBuilder::done() { out_ << "\n"; }

void dump_matrix_csv(std::ostream& out, const StateSpace& space,
                     const Eigen::MatrixXd& entries) {
  out << "state";
  for (std::size_t j = 0; j < space.size(); ++j) out << "," << space.label(j);
  out << "\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    out << space.label(i);
    for (std::size_t j = 0; j < space.size(); ++j) {
      out << ","
          << format_real(entries(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(j)));
    }
    out << "\n";
  }
}

}  // namespace seedscale

#pragma once

#include <cstdint>

namespace seedscale {

/// Counter-derived deterministic random stream. Two streams constructed from
/// the same (master_seed, replicate_index) produce identical draws, so Monte
/// Carlo results do not depend on execution order or worker count.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t replicate_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t replicate_index() const { return replicate_index_; }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Exponential with the given rate.
  double exponential(double rate = 1.0);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// Recorded in output metadata for reproducibility.
  static constexpr const char* kNormalMethod = "polar";

 private:
  std::uint64_t master_seed_;
  std::uint64_t replicate_index_;
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace seedscale

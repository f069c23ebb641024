#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace mtd {

/// Seedable 64-bit generator. Two sources built from the same (seed, stream)
/// produce the same sequence; distinct streams are statistically independent.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent source for a named sub-task, derived from this seed.
  RandomSource derive(std::string_view name) const;
  /// Independent source for an indexed sub-task (e.g. a replication).
  RandomSource derive(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Draws an index from a discrete distribution given by `weights`
  /// (need not be normalized; must have positive total).
  std::size_t categorical(std::span<const double> weights);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace mtd

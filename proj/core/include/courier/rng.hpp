#pragma once

#include <cstdint>

namespace courier {

/// Counter-based random stream.
///
/// A stream is identified by a 64-bit key derived from the master seed and a
/// path of tags (study, order index, replication index, ...). Draw `n` of a
/// stream is a pure function of (key, n), so the values an order sees never
/// depend on which worker evaluates it or in what order. Children obtained
/// through derive() are statistically independent of their parent and of
/// each other.
///
/// The generator is SplitMix64 keyed by the path hash. Distributions are
/// implemented here rather than through <random> because the standard
/// distributions are not bit-reproducible across library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept;

  RngStream derive(std::uint64_t tag) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Gaussian draw (Box-Muller, one value per two uniforms).
  double normal(double mean, double sd) noexcept;
  /// Index in [0, n) using the upper bits; n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  RngStream(std::uint64_t key, int) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer; exposed for hashing derivation tags.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace courier

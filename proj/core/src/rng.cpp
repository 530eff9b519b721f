#include "courier/rng.hpp"

#include <cmath>
#include <numbers>

namespace courier {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RngStream::RngStream(std::uint64_t seed) noexcept : key_(mix64(seed + kGamma)) {}

RngStream RngStream::derive(std::uint64_t tag) const noexcept {
  // Two rounds so that (key, tag) and (key', tag') collide only by accident.
  return RngStream(mix64(key_ ^ mix64(tag * kGamma + 0x632BE59BD9B4E019ULL)), 0);
}

std::uint64_t RngStream::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double RngStream::uniform(double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform();
}

double RngStream::normal(double mean, double sd) noexcept {
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;
  const double u2 = uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + sd * z;
}

std::uint64_t RngStream::below(std::uint64_t n) noexcept {
  // High half of the 128-bit product (Lemire's multiply-shift).
  const std::uint64_t x = next_u64();
  const std::uint64_t x_lo = x & 0xffffffffULL, x_hi = x >> 32;
  const std::uint64_t n_lo = n & 0xffffffffULL, n_hi = n >> 32;
  const std::uint64_t lo_lo = x_lo * n_lo;
  const std::uint64_t hi_lo = x_hi * n_lo;
  const std::uint64_t lo_hi = x_lo * n_hi;
  const std::uint64_t mid = (lo_lo >> 32) + (hi_lo & 0xffffffffULL) + lo_hi;
  return x_hi * n_hi + (hi_lo >> 32) + (mid >> 32);
}

}  // namespace courier

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace lassocv {

// All randomness in the library flows through this header so that a 64-bit
// seed fully determines every draw, on every platform.
//
// Engine: std::mt19937_64, whose output sequence is pinned bit-for-bit by the
// C++ standard. We never use std::*_distribution (their algorithms are
// implementation-defined); the mappings from raw 64-bit words to doubles are
// spelled out below instead.

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a hash of a purpose tag, used to decorrelate seed streams.
constexpr std::uint64_t tag64(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Child-seed derivation: fold words into the running state with mix64.
/// Order-sensitive, so (seed, n, rep) and (seed, rep, n) differ.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t word) {
  return mix64(seed ^ mix64(word));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  return derive_seed(seed, tag64(tag));
}

template <typename... Words>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t word, Words... rest) {
  return derive_seed(derive_seed(seed, word), rest...);
}

template <typename... Words>
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, Words... rest) {
  return derive_seed(derive_seed(seed, tag), rest...);
}

/// Deterministic source of uniform, Gaussian and Rademacher variates.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1): top 53 bits of one engine word.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform01_open_left() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller. Consumes two words per pair; the
  /// second variate of a pair is cached and returned by the next call.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open_left();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// +1 or -1 from the top bit of one engine word.
  double rademacher() {
    return (next_u64() >> 63) ? 1.0 : -1.0;
  }

  /// Uniform on [-sqrt(3), sqrt(3)]: mean 0, variance 1.
  double uniform_unit_variance() {
    constexpr double kSqrt3 = 1.7320508075688772;
    return (2.0 * uniform01() - 1.0) * kSqrt3;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lassocv

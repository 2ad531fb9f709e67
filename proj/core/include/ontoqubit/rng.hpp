#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace ontoqubit {

/// Counter-based random stream: output i is SplitMix64(key + i * gamma).
/// Streams are split by hashing a parent key with a task name, so every task
/// draws from its own reproducible sequence regardless of scheduling.
///
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) : key_(mix(seed)) {}

  /// Child stream keyed on (this stream's key, name). Does not advance this stream.
  RngStream split(std::string_view name) const;
  RngStream split(std::uint64_t index) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGamma * ++counter_); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal via Box-Muller (one value per two uniforms, no caching).
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  struct FromKey {};
  RngStream(FromKey, std::uint64_t key) : key_(key) {}
  static std::uint64_t mix(std::uint64_t z);

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// FNV-1a, used to fold task names into stream keys.
std::uint64_t hash_name(std::string_view name);

}  // namespace ontoqubit

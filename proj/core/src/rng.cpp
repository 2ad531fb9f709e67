#include "ontoqubit/rng.hpp"

#include <cmath>
#include <numbers>

namespace ontoqubit {

std::uint64_t RngStream::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RngStream RngStream::split(std::string_view name) const {
  return RngStream(FromKey{}, mix(key_ ^ mix(hash_name(name))));
}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(FromKey{}, mix(key_ ^ mix(index + kGamma)));
}

double RngStream::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ontoqubit

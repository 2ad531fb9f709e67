#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "ontoqubit/base_model.hpp"
#include "ontoqubit/geometry.hpp"
#include "ontoqubit/rng.hpp"

namespace ontoqubit::testing {

inline BlochVector random_unit(RngStream& rng) {
  // Gaussian direction; rejects the (measure-zero) tiny draws.
  for (;;) {
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r > 1e-3) return {x / r, y / r, z / r};
  }
}

inline BlochVector random_in_cone(RngStream& rng, double half_angle = kConeHalfAngle) {
  const double c = 1.0 - rng.uniform() * (1.0 - std::cos(half_angle));
  return from_spherical({std::min(std::acos(c), half_angle), kTwoPi * rng.uniform()});
}

/// Runs `property` on `count` independent streams derived from (seed, name).
inline void for_all(std::uint64_t seed, const char* name, int count, const std::function<void(RngStream&)>& property) {
  const RngStream root = RngStream(seed).split(name);
  for (int i = 0; i < count; ++i) {
    RngStream rng = root.split(static_cast<std::uint64_t>(i));
    property(rng);
  }
}

}  // namespace ontoqubit::testing

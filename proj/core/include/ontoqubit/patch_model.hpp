#pragma once

#include <array>
#include <string>

#include "ontoqubit/base_model.hpp"
#include "ontoqubit/geometry.hpp"
#include "ontoqubit/rng.hpp"

namespace ontoqubit {

inline constexpr int kPatchCount = 12;

/// Twelve rotated copies of the base model covering the sphere.
///
/// Axes are the icosahedron vertices in golden-ratio coordinates, normalized,
/// in this fixed order (phi = golden ratio):
///   (0, +-1, +-phi), (+-1, +-phi, 0), (+-phi, 0, +-1)
/// with the signs enumerated (+,+), (+,-), (-,+), (-,-) inside each group.
/// rotations[m] = rotation_taking(z-hat, axes[m]).
struct PatchAtlas {
  std::array<BlochVector, kPatchCount> axes;
  std::array<Rotation3, kPatchCount> rotations;
};

PatchAtlas build_atlas();

/// Max over a dense Fibonacci sphere grid of the angular distance to the nearest axis.
double covering_radius(const PatchAtlas& atlas, int grid_points = 20000);

/// Smallest index whose axis lies within arccos(3/5) of v.
int select_patch(const BlochVector& v, const PatchAtlas& atlas);

/// R_m^T v for the patch carried by the state.
BlochVector to_patch_frame(const BlochVector& v, int m, const PatchAtlas& atlas);

/// Two-point density of the rotated state, tagged with its patch.
struct PatchDensity {
  int m = 0;
  TwoPointDistribution density;
};

PatchDensity prepare_full_density(const BlochVector& v, const PatchAtlas& atlas);

OnticState prepare_full(const BlochVector& v, const PatchAtlas& atlas, RngStream& rng);

/// Base response of R_m^T w on (x, n); the complement rule acts in the patch frame.
/// Throws std::invalid_argument when the state carries no patch label.
double response_full(const BlochVector& w, const OnticState& s, const PatchAtlas& atlas);

double combined_probability_full(const BlochVector& w, const BlochVector& v, const PatchAtlas& atlas);

/// {"x": float, "n": 0|1, "m": 0..11}
std::string ontic_state_to_json(const OnticState& s);
/// Throws std::invalid_argument on malformed input.
OnticState ontic_state_from_json(const std::string& text);

}  // namespace ontoqubit

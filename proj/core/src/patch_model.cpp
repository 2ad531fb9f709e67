#include "ontoqubit/patch_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace ontoqubit {
namespace {

std::array<BlochVector, kPatchCount> icosahedron_vertices() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double norm = std::sqrt(1.0 + phi * phi);
  const double a = 1.0 / norm;
  const double b = phi / norm;
  return {{
      {0.0, a, b}, {0.0, a, -b}, {0.0, -a, b}, {0.0, -a, -b},
      {a, b, 0.0}, {a, -b, 0.0}, {-a, b, 0.0}, {-a, -b, 0.0},
      {b, 0.0, a}, {b, 0.0, -a}, {-b, 0.0, a}, {-b, 0.0, -a},
  }};
}

int checked_patch(const OnticState& s) {
  if (!s.m) throw std::invalid_argument("ontic state carries no patch label");
  if (*s.m < 0 || *s.m >= kPatchCount) throw std::invalid_argument("patch label out of range");
  return *s.m;
}

}  // namespace

PatchAtlas build_atlas() {
  PatchAtlas atlas{icosahedron_vertices(), {}};
  for (int m = 0; m < kPatchCount; ++m) {
    atlas.rotations[m] = rotation_taking(BlochVector::unit_z(), atlas.axes[m]);
  }
  return atlas;
}

double covering_radius(const PatchAtlas& atlas, int grid_points) {
  // Fibonacci lattice.
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / grid_points;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden_angle * i;
    const BlochVector v(r * std::cos(a), r * std::sin(a), z);
    double nearest = kPi;
    for (const BlochVector& axis : atlas.axes) nearest = std::min(nearest, angular_distance(v, axis));
    worst = std::max(worst, nearest);
  }
  return worst;
}

int select_patch(const BlochVector& v, const PatchAtlas& atlas) {
  for (int m = 0; m < kPatchCount; ++m) {
    if (angular_distance(v, atlas.axes[m]) <= kConeHalfAngle) return m;
  }
  throw std::logic_error("select_patch: atlas does not cover the sphere");
}

BlochVector to_patch_frame(const BlochVector& v, int m, const PatchAtlas& atlas) {
  return atlas.rotations.at(m).apply_inverse(v);
}

PatchDensity prepare_full_density(const BlochVector& v, const PatchAtlas& atlas) {
  const int m = select_patch(v, atlas);
  return {m, prepare_density(to_patch_frame(v, m, atlas))};
}

OnticState prepare_full(const BlochVector& v, const PatchAtlas& atlas, RngStream& rng) {
  const int m = select_patch(v, atlas);
  OnticState s = prepare_sample(to_patch_frame(v, m, atlas), rng);
  s.m = m;
  return s;
}

double response_full(const BlochVector& w, const OnticState& s, const PatchAtlas& atlas) {
  const int m = checked_patch(s);
  return response(to_patch_frame(w, m, atlas), {s.x, s.n, std::nullopt});
}

double combined_probability_full(const BlochVector& w, const BlochVector& v, const PatchAtlas& atlas) {
  const PatchDensity pd = prepare_full_density(v, atlas);
  const TwoPointDistribution& d = pd.density;
  double p = 0.0;
  if (d.weight0 > 0.0) p += d.weight0 * response_full(w, {d.point0, Branch::kAzimuthal, pd.m}, atlas);
  if (d.weight1 > 0.0) p += d.weight1 * response_full(w, {d.point1, Branch::kZenithal, pd.m}, atlas);
  return p;
}

std::string ontic_state_to_json(const OnticState& s) {
  nlohmann::ordered_json j;
  j["x"] = s.x;
  j["n"] = branch_index(s.n);
  if (s.m) j["m"] = *s.m;
  return j.dump();
}

OnticState ontic_state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("ontic state JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("x") || !j.contains("n") || !j["x"].is_number() ||
      !j["n"].is_number_integer()) {
    throw std::invalid_argument("ontic state JSON: expected {\"x\": number, \"n\": 0|1, \"m\": 0..11}");
  }
  OnticState s;
  s.x = j["x"].get<double>();
  const int n = j["n"].get<int>();
  if (n != 0 && n != 1) throw std::invalid_argument("ontic state JSON: n must be 0 or 1");
  s.n = static_cast<Branch>(n);
  if (j.contains("m")) {
    if (!j["m"].is_number_integer()) throw std::invalid_argument("ontic state JSON: m must be an integer");
    const int m = j["m"].get<int>();
    if (m < 0 || m >= kPatchCount) throw std::invalid_argument("ontic state JSON: m must lie in 0..11");
    s.m = m;
  }
  return s;
}

}  // namespace ontoqubit

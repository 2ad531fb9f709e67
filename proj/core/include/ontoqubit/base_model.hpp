#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ontoqubit/geometry.hpp"
#include "ontoqubit/rng.hpp"

namespace ontoqubit {

/// Half-aperture of the cone of preparations the one-dimensional model
/// supports: arccos(3/5).
inline const double kConeHalfAngle = std::acos(0.6);
/// Slack on cone membership so that angle round trips landing a few ulp past
/// the boundary still count as on it.
inline constexpr double kConeTol = 1e-12;

enum class Branch : std::uint8_t { kAzimuthal = 0, kZenithal = 1 };

inline int branch_index(Branch b) { return static_cast<int>(b); }

/// Hidden-variable state: continuous coordinate x, binary branch n and, for the
/// full-sphere model, the patch label m.
struct OnticState {
  double x = 0.0;
  Branch n = Branch::kAzimuthal;
  std::optional<int> m;

  friend bool operator==(const OnticState&, const OnticState&) = default;
};

/// Inert provenance labels. They never enter a probability.
struct PreparationRecord {
  BlochVector v;
  std::string context_tag;
};

struct MeasurementRecord {
  BlochVector w;
  std::string context_tag;
};

/// Two-delta distribution over (x, n): mass weight0 at (point0, n=0) and
/// weight1 at (point1, n=1). weight0 + weight1 == 1 exactly.
struct TwoPointDistribution {
  double weight0 = 0.0;
  double point0 = 0.0;
  double weight1 = 1.0;
  double point1 = 0.0;
};

/// Outcome of a projective measurement: +1 for the event w, -1 for -w.
enum class Outcome : int { kMinus = -1, kPlus = 1 };

/// theta(v) <= arccos(3/5) + kConeTol. The cone is closed.
bool in_validity_cone(const BlochVector& v);

/// Preparation density: sin(theta) at x = phi on branch 0, 1 - sin(theta) at
/// x = min(theta, arccos(3/5)) on branch 1. Throws ValidityError outside the cone.
TwoPointDistribution prepare_density(const BlochVector& v);
TwoPointDistribution prepare_density(const PreparationRecord& rec);

/// Draws an ontic state from prepare_density(v).
OnticState prepare_sample(const BlochVector& v, RngStream& rng);

/// Probability of the event w given the ontic state. Events with w_z >= 0 use
/// the response functions directly; w_z < 0 uses 1 - response(-w, s).
///
/// The response functions are evaluated in half-angle form,
///   P(w|x,0) = 1 - |w_perp| sin^2((psi - x)/2),        psi = azimuth of w
///   P(w|x,1) = 1 - sin^2((alpha - x)/2) / (1 - sin x), alpha = zenith of w
/// which equals the trigonometric form algebraically and is exactly 1 when w
/// coincides with the state that produced s.
///
/// Throws ValidityError for branch 1 with x outside [0, arccos(3/5)].
double response(const BlochVector& w, const OnticState& s);

Outcome sample_outcome(const BlochVector& w, const OnticState& s, RngStream& rng);

/// Combined probability sum_n weight_n * response(w, point_n) for a state in the cone.
double combined_probability(const BlochVector& w, const BlochVector& v);

/// |combined_probability(w, v) - born_probability(w, v)|.
double born_check(const BlochVector& v, const BlochVector& w);

/// min over events with w_z > 0 of the branch-1 response at x.
/// The response only depends on the zenith of w, so this is a 1-D minimization.
double min_zenithal_response(double x);

/// Largest x for which min_zenithal_response(x) >= 0, found numerically by
/// bracketing and bisection. Converges to arccos(3/5).
double validity_boundary();

}  // namespace ontoqubit

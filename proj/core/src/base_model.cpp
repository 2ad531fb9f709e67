#include "ontoqubit/base_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ontoqubit/errors.hpp"

namespace ontoqubit {
namespace {

double sq(double a) { return a * a; }

void check_state(const OnticState& s) {
  if (s.n == Branch::kAzimuthal) {
    if (!(s.x >= 0.0 && s.x < kTwoPi)) {
      throw ValidityError("ontic state: branch 0 coordinate outside [0, 2pi)");
    }
  } else if (!(s.x >= 0.0 && s.x <= kConeHalfAngle)) {
    std::ostringstream msg;
    msg << "ontic state: branch 1 coordinate " << s.x << " outside [0, arccos(3/5) = "
        << kConeHalfAngle << "]";
    throw ValidityError(msg.str());
  }
}

// Response functions for events with w_z >= 0, unclamped.
double raw_azimuthal(const BlochVector& w, double x) {
  const double rho = std::hypot(w.x(), w.y());
  const double psi = azimuth(w.x(), w.y());
  return 1.0 - rho * sq(std::sin(0.5 * (psi - x)));
}

double zenithal_from_angle(double alpha, double x) {
  return 1.0 - sq(std::sin(0.5 * (alpha - x))) / (1.0 - std::sin(x));
}

double raw_zenithal(const BlochVector& w, double x) {
  return zenithal_from_angle(std::atan2(std::hypot(w.x(), w.y()), w.z()), x);
}

double upper_response(const BlochVector& w, const OnticState& s) {
  const double p = s.n == Branch::kAzimuthal ? raw_azimuthal(w, s.x) : raw_zenithal(w, s.x);
  return std::clamp(p, 0.0, 1.0);
}

void check_cone(const SphericalAngles& a) {
  if (!(a.theta <= kConeHalfAngle + kConeTol)) {
    std::ostringstream msg;
    msg << "preparation outside the validity cone: theta = " << a.theta
        << " > arccos(3/5) = " << kConeHalfAngle;
    throw ValidityError(msg.str());
  }
}

}  // namespace

bool in_validity_cone(const BlochVector& v) { return to_spherical(v).theta <= kConeHalfAngle + kConeTol; }

TwoPointDistribution prepare_density(const BlochVector& v) {
  const SphericalAngles a = to_spherical(v);
  check_cone(a);
  TwoPointDistribution d;
  d.weight0 = std::sin(a.theta);
  d.point0 = a.phi;
  d.weight1 = 1.0 - d.weight0;
  d.point1 = std::min(a.theta, kConeHalfAngle);
  return d;
}

TwoPointDistribution prepare_density(const PreparationRecord& rec) { return prepare_density(rec.v); }

OnticState prepare_sample(const BlochVector& v, RngStream& rng) {
  const TwoPointDistribution d = prepare_density(v);
  if (rng.uniform() < d.weight0) return {d.point0, Branch::kAzimuthal, std::nullopt};
  return {d.point1, Branch::kZenithal, std::nullopt};
}

double response(const BlochVector& w, const OnticState& s) {
  check_state(s);
  if (w.z() < 0.0) return 1.0 - upper_response(-w, s);
  return upper_response(w, s);
}

Outcome sample_outcome(const BlochVector& w, const OnticState& s, RngStream& rng) {
  return rng.bernoulli(response(w, s)) ? Outcome::kPlus : Outcome::kMinus;
}

double combined_probability(const BlochVector& w, const BlochVector& v) {
  const TwoPointDistribution d = prepare_density(v);
  double p = 0.0;
  if (d.weight0 > 0.0) p += d.weight0 * response(w, {d.point0, Branch::kAzimuthal, std::nullopt});
  if (d.weight1 > 0.0) p += d.weight1 * response(w, {d.point1, Branch::kZenithal, std::nullopt});
  return p;
}

double born_check(const BlochVector& v, const BlochVector& w) {
  return std::abs(combined_probability(w, v) - born_probability(w, v));
}

double min_zenithal_response(double x) {
  // The response depends on w only through its zenith alpha in [0, pi/2].
  constexpr int kGrid = 2048;
  const double hi = kPi / 2.0;
  int best = 0;
  double best_val = zenithal_from_angle(0.0, x);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = zenithal_from_angle(hi * i / kGrid, x);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section polish inside the neighbouring cells.
  double a = hi * std::max(0, best - 1) / kGrid;
  double b = hi * std::min(kGrid, best + 1) / kGrid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  for (int it = 0; it < 80; ++it) {
    if (zenithal_from_angle(c, x) < zenithal_from_angle(d, x)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  return std::min(best_val, zenithal_from_angle(0.5 * (a + b), x));
}

double validity_boundary() {
  // Scan for the first sign change, then bisect.
  constexpr double kStep = 1e-2;
  double lo = 0.0;
  double hi = lo;
  while (true) {
    hi = lo + kStep;
    if (hi >= kPi / 2.0 - kStep) return lo;  // never negative below pi/2
    if (min_zenithal_response(hi) < 0.0) break;
    lo = hi;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (min_zenithal_response(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace ontoqubit

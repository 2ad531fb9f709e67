#include "ontoqubit/family_model.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ontoqubit/errors.hpp"

namespace ontoqubit {
namespace {

double sq(double a) { return a * a; }

void check_pole(double x1) {
  if (!(x1 > kPoleTol && x1 < kPi - kPoleTol)) {
    std::ostringstream msg;
    msg << "coordinate x1 = " << x1 << " is on or beyond a pole of the coordinate system";
    throw SingularityError(msg.str());
  }
}

void check_coords(const CoordPair& c) {
  if (!(c.x0 >= 0.0 && c.x0 < kTwoPi)) {
    throw std::invalid_argument("coordinate x0 outside [0, 2pi)");
  }
  check_pole(c.x1);
}

// Closed forms for events on the upper hemisphere (w_z >= 0), unclamped.
double upper_azimuthal(const BlochVector& w, double x, const ModelParams& p) {
  const double bx = w.x() - p.cos_theta0();
  const double by = w.y() * p.sin_theta0();
  const double delta = std::hypot(bx, by);
  const double beta = azimuth(bx, by);
  return 1.0 - delta * sq(std::sin(0.5 * (beta - x))) / (p.s() + p.cos_theta0() * std::cos(x));
}

double upper_zenithal(const BlochVector& w, double x, const ModelParams& p) {
  // For unit w, Delta^2 + (w_z sin theta0)^2 = (1 - w_x cos theta0)^2.
  const double rho = 1.0 - w.x() * p.cos_theta0();
  const double gamma = std::atan2(family_delta(w, p), w.z() * p.sin_theta0());
  return 1.0 - rho * sq(std::sin(0.5 * (gamma - x))) / (1.0 - p.s() * std::sin(x));
}

double upper(const BlochVector& w, Branch n, double x, const ModelParams& p) {
  return n == Branch::kAzimuthal ? upper_azimuthal(w, x, p) : upper_zenithal(w, x, p);
}

BlochVector hemisphere_point(double polar, double az) {
  const double sp = std::sin(polar);
  return {sp * std::cos(az), sp * std::sin(az), std::cos(polar)};
}

// Pattern search over the closed upper hemisphere starting at (a, b).
// sign = +1 minimizes P, -1 maximizes it.
double polish_extreme(Branch n, double x, const ModelParams& p, double a, double b, double step,
                      double sign) {
  auto f = [&](double pa, double pb) {
    pa = std::clamp(pa, 0.0, kPi / 2.0);
    return sign * upper(hemisphere_point(pa, pb), n, x, p);
  };
  double best = f(a, b);
  double sa = step;
  double sb = 2.0 * step;
  for (int it = 0; it < 200 && (sa > 1e-13 || sb > 1e-13); ++it) {
    bool moved = false;
    const double cand[4][2] = {{a + sa, b}, {a - sa, b}, {a, b + sb}, {a, b - sb}};
    for (const auto& c : cand) {
      const double v = f(c[0], c[1]);
      if (v < best) {
        best = v;
        a = std::clamp(c[0], 0.0, kPi / 2.0);
        b = c[1];
        moved = true;
      }
    }
    if (!moved) {
      sa *= 0.5;
      sb *= 0.5;
    }
  }
  return sign * best;
}

bool admissible_at(Branch n, double x, const ModelParams& p, const RegionOptions& opt) {
  const auto [lo, hi] = event_extremes(n, x, p, opt);
  return lo >= -opt.tolerance && hi <= 1.0 + opt.tolerance;
}

double bisect_boundary(Branch n, double inside, double outside, const ModelParams& p,
                       const RegionOptions& opt) {
  for (int it = 0; it < 60 && std::abs(outside - inside) > 1e-13; ++it) {
    const double mid = 0.5 * (inside + outside);
    (admissible_at(n, mid, p, opt) ? inside : outside) = mid;
  }
  return inside;
}

AdmissibleSet scan_axis(Branch n, const ModelParams& p, const RegionOptions& opt) {
  const int m = std::max(opt.x_scan, 8);
  std::vector<double> xs(m);
  if (n == Branch::kAzimuthal) {
    for (int k = 0; k < m; ++k) xs[k] = kTwoPi * k / m;
  } else {
    for (int k = 0; k < m; ++k) xs[k] = kRegionCollar + (kPi - 2.0 * kRegionCollar) * k / (m - 1);
  }
  std::vector<char> ok(m);
  for (int k = 0; k < m; ++k) ok[k] = admissible_at(n, xs[k], p, opt) ? 1 : 0;

  // The azimuthal axis is a circle: runs may continue across 2pi = 0.
  const bool cyclic = n == Branch::kAzimuthal;
  std::vector<AdmissibleSet::Interval> out;
  for (int k = 0; k < m;) {
    if (!ok[k]) {
      ++k;
      continue;
    }
    int end = k;
    while (end + 1 < m && ok[end + 1]) ++end;
    double lo;
    double hi;
    if (k > 0) {
      lo = bisect_boundary(n, xs[k], xs[k - 1], p, opt);
    } else if (!cyclic || ok[m - 1]) {
      lo = xs[0];
    } else {
      lo = 0.0;
      const double edge = bisect_boundary(n, kTwoPi, xs[m - 1], p, opt);
      if (edge < kTwoPi) out.push_back({edge, kTwoPi});
    }
    if (end < m - 1) {
      hi = bisect_boundary(n, xs[end], xs[end + 1], p, opt);
    } else if (!cyclic) {
      hi = xs[m - 1];
    } else if (ok[0]) {
      hi = kTwoPi;
    } else {
      hi = bisect_boundary(n, xs[end], kTwoPi, p, opt);
    }
    out.push_back({lo, hi});
    k = end + 1;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  return AdmissibleSet(std::move(out));
}

}  // namespace

ModelParams::ModelParams(double theta0, double s) : theta0_(theta0), s_(s) {
  if (!(theta0 > 0.0 && theta0 <= kPi / 2.0)) {
    throw std::invalid_argument("ModelParams: theta0 must lie in (0, pi/2]");
  }
  cos_ = std::cos(theta0);
  sin_ = std::sin(theta0);
  if (!(s >= std::abs(cos_) && s <= 1.0)) {
    std::ostringstream msg;
    msg << "ModelParams: weights are negative unless |cos theta0| <= s <= 1 (cos theta0 = " << cos_
        << ", s = " << s << ")";
    throw std::invalid_argument(msg.str());
  }
}

Eigen::Vector3d g0(double x0, const ModelParams& p) {
  return {std::cos(x0), std::sin(x0) * p.sin_theta0(), 0.0};
}

double inv_k0(double x0, const ModelParams& p) { return p.cos_theta0() * std::cos(x0) + p.s(); }

double k0(double x0, const ModelParams& p) { return 1.0 / inv_k0(x0, p); }

Eigen::Vector3d g1(double x1, const ModelParams& p) {
  check_pole(x1);
  const double csc = 1.0 / std::sin(x1);
  return {p.cos_theta0() * csc, 0.0, std::cos(x1) * csc * p.sin_theta0()};
}

double inv_k1(double x1, const ModelParams& p) {
  check_pole(x1);
  return 1.0 / std::sin(x1) - p.s();
}

double k1(double x1, const ModelParams& p) { return 1.0 / inv_k1(x1, p); }

BlochVector coord_to_bloch(const CoordPair& c, const ModelParams& p) {
  check_coords(c);
  const double st = std::sin(c.x1);
  const double ux = st * std::cos(c.x0);
  const double uy = st * std::sin(c.x0);
  const double uz = std::cos(c.x1);
  const double denom = 1.0 + p.cos_theta0() * ux;
  return {(p.cos_theta0() + ux) / denom, p.sin_theta0() * uy / denom, p.sin_theta0() * uz / denom};
}

double family_delta(const BlochVector& u, const ModelParams& p) {
  return std::hypot(u.x() - p.cos_theta0(), u.y() * p.sin_theta0());
}

double family_h(const BlochVector& w, const ModelParams& p) {
  return 0.5 * (p.s() - family_delta(w, p));
}

CoordPair bloch_to_coord(const BlochVector& v, const ModelParams& p) {
  const double delta = family_delta(v, p);
  CoordPair c;
  c.x1 = std::atan2(delta, v.z() * p.sin_theta0());
  if (!(c.x1 > kPoleTol && c.x1 < kPi - kPoleTol)) {
    throw SingularityError("bloch_to_coord: state sits on a pole of the coordinate system");
  }
  c.x0 = azimuth(v.x() - p.cos_theta0(), v.y() * p.sin_theta0());
  return c;
}

Weights weights(const CoordPair& c, const ModelParams& p) {
  check_coords(c);
  const double st = std::sin(c.x1);
  const double cc = p.cos_theta0() * std::cos(c.x0);
  Weights r;
  r.r0 = st * (p.s() + cc) / (1.0 + cc * st);
  r.r1 = 1.0 - r.r0;
  return r;
}

double family_probability(const BlochVector& w, Branch n, double x, const ModelParams& p) {
  if (w.z() < 0.0) return 1.0 - upper(-w, n, x, p);
  return upper(w, n, x, p);
}

FamilySolution FamilySolution::standard(const ModelParams& p) {
  FamilySolution sol;
  sol.g0 = [p](double x) { return ontoqubit::g0(x, p); };
  sol.inv_k0 = [p](double x) { return ontoqubit::inv_k0(x, p); };
  sol.g1 = [p](double x) { return ontoqubit::g1(x, p); };
  sol.inv_k1 = [p](double x) { return ontoqubit::inv_k1(x, p); };
  return sol;
}

MinkowskiOffsets MinkowskiOffsets::standard(const ModelParams& p) {
  MinkowskiOffsets off;
  off.chi0 = -p.s();
  off.chi1 = p.s();
  return off;
}

FourVector alpha_vector(double x0, const FamilySolution& sol, const MinkowskiOffsets& off) {
  return {sol.g0(x0) + off.gamma0, sol.inv_k0(x0) + off.chi0};
}

FourVector beta_vector(double x1, const FamilySolution& sol, const MinkowskiOffsets& off) {
  return {sol.g1(x1) + off.gamma1, sol.inv_k1(x1) + off.chi1};
}

double verify_orthogonality(std::span<const double> x0_grid, std::span<const double> x1_grid,
                            const FamilySolution& sol, const MinkowskiOffsets& off) {
  double worst = 0.0;
  for (double x0 : x0_grid) {
    const FourVector a = alpha_vector(x0, sol, off);
    for (double x1 : x1_grid) worst = std::max(worst, std::abs(a.minkowski(beta_vector(x1, sol, off))));
  }
  return worst;
}

double verify_orthogonality(std::span<const double> x0_grid, std::span<const double> x1_grid,
                            const ModelParams& p) {
  return verify_orthogonality(x0_grid, x1_grid, FamilySolution::standard(p), MinkowskiOffsets::standard(p));
}

double verify_main_constraint(std::span<const double> x0_grid, std::span<const double> x1_grid,
                              const FamilySolution& sol) {
  double worst = 0.0;
  for (double x0 : x0_grid) {
    const Eigen::Vector3d a = sol.g0(x0);
    const double ka = sol.inv_k0(x0);
    for (double x1 : x1_grid) {
      const double lhs = (a + sol.g1(x1)).squaredNorm();
      const double rhs = sq(ka + sol.inv_k1(x1));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double verify_main_constraint(std::span<const double> x0_grid, std::span<const double> x1_grid,
                              const ModelParams& p) {
  return verify_main_constraint(x0_grid, x1_grid, FamilySolution::standard(p));
}

Eigen::Matrix4d weight_matrix(double x0, double x1, double y0, double y1,
                              const std::function<Weights(const CoordPair&)>& r) {
  const Weights a = r({x0, x1});
  const Weights b = r({x0, y1});
  const Weights c = r({y0, x1});
  const Weights d = r({y0, y1});
  Eigen::Matrix4d m;
  m << a.r0, 0.0, a.r1, 0.0,
       b.r0, 0.0, 0.0, b.r1,
       0.0, c.r0, c.r1, 0.0,
       0.0, d.r0, 0.0, d.r1;
  return m;
}

DetNullResult verify_detR_null(double x0, double x1, double y0, double y1, const BlochVector& w,
                               const ModelParams& p) {
  const Eigen::Matrix4d r =
      weight_matrix(x0, x1, y0, y1, [&p](const CoordPair& c) { return weights(c, p); });
  const Eigen::Vector4d u(inv_k0(x0, p) + inv_k1(x1, p), -inv_k0(x0, p) - inv_k1(y1, p),
                          -inv_k0(y0, p) - inv_k1(x1, p), inv_k0(y0, p) + inv_k1(y1, p));
  const auto source = [&](double a, double b) {
    return 0.5 * (1.0 + w.dot(coord_to_bloch({a, b}, p)));
  };
  const Eigen::Vector4d s(source(x0, x1), source(x0, y1), source(y0, x1), source(y0, y1));
  DetNullResult out;
  out.det = r.determinant();
  out.null_residual_r = (u.transpose() * r).cwiseAbs().maxCoeff();
  out.null_residual_s = std::abs(u.dot(s));
  return out;
}

HConsistency h_routes(const BlochVector& v, const ModelParams& p) {
  const CoordPair c = bloch_to_coord(v, p);
  HConsistency h;
  h.from_k0 = 0.5 * (inv_k0(c.x0, p) - v.vec().dot(g0(c.x0, p)));
  h.from_k1 = -0.5 * (inv_k1(c.x1, p) - v.vec().dot(g1(c.x1, p)));
  h.closed_form = family_h(v, p);
  return h;
}

double verify_H_consistency(std::span<const BlochVector> vs, const ModelParams& p) {
  double worst = 0.0;
  for (const BlochVector& v : vs) {
    const HConsistency h = h_routes(v, p);
    worst = std::max({worst, std::abs(h.from_k0 - h.closed_form), std::abs(h.from_k1 - h.closed_form),
                      std::abs(h.from_k0 - h.from_k1)});
  }
  return worst;
}

bool AdmissibleSet::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& i) { return x >= i.lo && x <= i.hi; });
}

double AdmissibleSet::measure() const {
  double total = 0.0;
  for (const Interval& i : intervals_) total += i.hi - i.lo;
  return total;
}

std::pair<double, double> event_extremes(Branch n, double x, const ModelParams& p,
                                         const RegionOptions& opt) {
  const int na = std::max(opt.event_polar, 2);
  const int nb = std::max(opt.event_azimuth, 4);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double lo_a = 0, lo_b = 0, hi_a = 0, hi_b = 0;
  for (int i = 0; i <= na; ++i) {
    const double a = 0.5 * kPi * i / na;
    for (int j = 0; j < (i == 0 ? 1 : nb); ++j) {
      const double b = kTwoPi * j / nb;
      const double v = upper(hemisphere_point(a, b), n, x, p);
      if (v < lo) {
        lo = v;
        lo_a = a;
        lo_b = b;
      }
      if (v > hi) {
        hi = v;
        hi_a = a;
        hi_b = b;
      }
    }
  }
  const double step = 0.5 * kPi / na;
  lo = std::min(lo, polish_extreme(n, x, p, lo_a, lo_b, step, 1.0));
  hi = std::max(hi, polish_extreme(n, x, p, hi_a, hi_b, step, -1.0));
  return {lo, hi};
}

bool PositivityRegion::contains(const BlochVector& v) const {
  CoordPair c;
  try {
    c = bloch_to_coord(v, params);
  } catch (const SingularityError&) {
    return false;
  }
  if (c.x1 < kRegionCollar || c.x1 > kPi - kRegionCollar) return false;
  return x0_set.contains(c.x0) && x1_set.contains(c.x1);
}

double PositivityRegion::max_valid_theta() const {
  double best = -1.0;
  for (const RegionSample& s : samples) {
    if (s.valid) best = std::max(best, s.theta_v);
  }
  return best;
}

PositivityRegion positivity_region(const ModelParams& p, int resolution, const RegionOptions& opt) {
  if (resolution < 2) throw std::invalid_argument("positivity_region: resolution must be >= 2");
  PositivityRegion region{p, scan_axis(Branch::kAzimuthal, p, opt), scan_axis(Branch::kZenithal, p, opt),
                          {}, resolution, 2 * resolution};
  region.samples.reserve(static_cast<std::size_t>(resolution + 1) * 2 * resolution);
  for (int i = 0; i <= resolution; ++i) {
    const double theta = kPi * i / resolution;
    for (int j = 0; j < 2 * resolution; ++j) {
      const double phi = kTwoPi * j / (2 * resolution);
      const BlochVector v = from_spherical({theta, phi});
      region.samples.push_back({theta, phi, region.contains(v)});
    }
  }
  return region;
}

FamilyModel::FamilyModel(const ModelParams& p, int resolution) : region_(positivity_region(p, resolution)) {}

bool FamilyModel::admissible(Branch n, double x) const {
  return n == Branch::kAzimuthal ? region_.x0_set.contains(x) : region_.x1_set.contains(x);
}

double FamilyModel::response(const BlochVector& w, Branch n, double x) const {
  if (!admissible(n, x)) {
    std::ostringstream msg;
    msg << "family response: ontic state (x = " << x << ", n = " << branch_index(n)
        << ") lies outside the positivity region";
    throw ValidityError(msg.str());
  }
  return std::clamp(family_probability(w, n, x, params()), 0.0, 1.0);
}

TwoPointDistribution FamilyModel::prepare_density(const BlochVector& v) const {
  const CoordPair c = bloch_to_coord(v, params());
  if (!admissible(Branch::kAzimuthal, c.x0) || !admissible(Branch::kZenithal, c.x1)) {
    throw ValidityError("family preparation outside the positivity region");
  }
  const Weights r = weights(c, params());
  return {r.r0, c.x0, r.r1, c.x1};
}

double FamilyModel::combined_probability(const BlochVector& w, const BlochVector& v) const {
  const TwoPointDistribution d = prepare_density(v);
  return d.weight0 * response(w, Branch::kAzimuthal, d.point0) +
         d.weight1 * response(w, Branch::kZenithal, d.point1);
}

}  // namespace ontoqubit

#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <vector>

#include "ontoqubit/base_model.hpp"
#include "ontoqubit/geometry.hpp"

namespace ontoqubit {

/// Parameters of the two-delta family. theta0 in (0, pi/2], and
/// |cos theta0| <= s <= 1 so that both weights stay in [0, 1].
class ModelParams {
 public:
  /// Throws std::invalid_argument when the constraints are violated.
  ModelParams(double theta0, double s);

  /// theta0 = pi/2, s = 1: the one-dimensional model of base_model.hpp.
  static ModelParams base() { return {kPi / 2.0, 1.0}; }

  double theta0() const { return theta0_; }
  double s() const { return s_; }
  double cos_theta0() const { return cos_; }
  double sin_theta0() const { return sin_; }

 private:
  double theta0_;
  double s_;
  double cos_;
  double sin_;
};

/// Ontic coordinates (x0, x1) that label a preparation: x0 in [0, 2pi),
/// x1 in (0, pi). The poles x1 = 0, pi are excluded.
struct CoordPair {
  double x0 = 0.0;
  double x1 = kPi / 2.0;
};

/// Minkowski four-vector with signature (+, +, +, -).
struct FourVector {
  Eigen::Vector3d spatial = Eigen::Vector3d::Zero();
  double temporal = 0.0;

  double minkowski(const FourVector& o) const {
    return spatial.dot(o.spatial) - temporal * o.temporal;
  }
};

/// Distance below which x1 counts as sitting on a pole.
inline constexpr double kPoleTol = 1e-9;
/// Collar excluded around the poles when mapping the positivity region.
inline constexpr double kRegionCollar = 1e-6;

// Solution of the constraint (g0 + g1)^2 = (1/k0 + 1/k1)^2, up to rotations.
Eigen::Vector3d g0(double x0, const ModelParams& p);
double k0(double x0, const ModelParams& p);
/// Throws SingularityError at the poles.
Eigen::Vector3d g1(double x1, const ModelParams& p);
double k1(double x1, const ModelParams& p);
/// 1/k0 = cos(theta0) cos(x0) + s.
double inv_k0(double x0, const ModelParams& p);
/// 1/k1 = csc(x1) - s. Throws SingularityError at the poles.
double inv_k1(double x1, const ModelParams& p);

/// Throws SingularityError when x1 is within kPoleTol of 0 or pi.
BlochVector coord_to_bloch(const CoordPair& c, const ModelParams& p);
/// Inverse of coord_to_bloch. Delta is evaluated with the components of v.
/// Throws SingularityError at the images (cos theta0, 0, +-sin theta0) of the poles.
CoordPair bloch_to_coord(const BlochVector& v, const ModelParams& p);

/// sqrt((u_x - cos theta0)^2 + u_y^2 sin^2 theta0) for any unit vector u.
double family_delta(const BlochVector& u, const ModelParams& p);

/// H(w) = (s - Delta(w))/2.
double family_h(const BlochVector& w, const ModelParams& p);

struct Weights {
  double r0 = 0.0;
  double r1 = 1.0;
};

/// r(0|x) and r(1|x) = 1 - r(0|x). Throws SingularityError at the poles.
Weights weights(const CoordPair& c, const ModelParams& p);

/// Event probability from the final closed forms, with the base model's
/// complement rule (w_z < 0 uses 1 - P(-w)). No region check; see FamilyModel.
double family_probability(const BlochVector& w, Branch n, double x, const ModelParams& p);

/// The k/g building blocks behind every identity check. Tests swap in
/// perturbed members as negative controls.
struct FamilySolution {
  std::function<Eigen::Vector3d(double)> g0;
  std::function<double(double)> inv_k0;
  std::function<Eigen::Vector3d(double)> g1;
  std::function<double(double)> inv_k1;

  static FamilySolution standard(const ModelParams& p);
};

/// Offsets (gamma_n, chi_n) of the four-vectors alpha(x0), beta(x1).
struct MinkowskiOffsets {
  Eigen::Vector3d gamma0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d gamma1 = Eigen::Vector3d::Zero();
  double chi0 = 0.0;
  double chi1 = 0.0;

  /// gamma = 0, chi0 = -s, chi1 = +s: the choice that makes alpha.beta vanish
  /// identically for the standard solution.
  static MinkowskiOffsets standard(const ModelParams& p);
};

FourVector alpha_vector(double x0, const FamilySolution& sol, const MinkowskiOffsets& off);
FourVector beta_vector(double x1, const FamilySolution& sol, const MinkowskiOffsets& off);

/// max |alpha(x0).beta(x1)| over the grid product.
double verify_orthogonality(std::span<const double> x0_grid, std::span<const double> x1_grid,
                            const FamilySolution& sol, const MinkowskiOffsets& off);
double verify_orthogonality(std::span<const double> x0_grid, std::span<const double> x1_grid,
                            const ModelParams& p);

/// max |(g0 + g1)^2 - (1/k0 + 1/k1)^2| over the grid product.
double verify_main_constraint(std::span<const double> x0_grid, std::span<const double> x1_grid,
                              const FamilySolution& sol);
double verify_main_constraint(std::span<const double> x0_grid, std::span<const double> x1_grid,
                              const ModelParams& p);

/// 4x4 weight matrix for the coordinate quadruple, rows
/// (x0,x1), (x0,y1), (y0,x1), (y0,y1).
Eigen::Matrix4d weight_matrix(double x0, double x1, double y0, double y1,
                              const std::function<Weights(const CoordPair&)>& r);

struct DetNullResult {
  double det = 0.0;
  double null_residual_r = 0.0;   // max |u^T R|
  double null_residual_s = 0.0;   // |u^T S|
};

/// Builds R from weights(), the explicit left null vector u from k0, k1, and the
/// Born source vector S for the event w.
DetNullResult verify_detR_null(double x0, double x1, double y0, double y1,
                               const BlochVector& w, const ModelParams& p);

struct HConsistency {
  double from_k0 = 0.0;   // (1/k0(x0) - v.g0(x0)) / 2
  double from_k1 = 0.0;   // -(1/k1(x1) - v.g1(x1)) / 2
  double closed_form = 0.0;  // (s - Delta(v)) / 2
};

/// The three routes to H(v). Throws SingularityError at the poles.
HConsistency h_routes(const BlochVector& v, const ModelParams& p);
/// Max pairwise disagreement of h_routes over the given states.
double verify_H_consistency(std::span<const BlochVector> vs, const ModelParams& p);

/// Closed intervals on one ontic axis.
class AdmissibleSet {
 public:
  struct Interval {
    double lo;
    double hi;
  };

  AdmissibleSet() = default;
  explicit AdmissibleSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {}

  bool contains(double x) const;
  bool empty() const { return intervals_.empty(); }
  const std::vector<Interval>& intervals() const { return intervals_; }
  /// Total length.
  double measure() const;

 private:
  std::vector<Interval> intervals_;
};

struct RegionSample {
  double theta_v = 0.0;
  double phi_v = 0.0;
  bool valid = false;
};

/// Where every weight and event probability stays in [0, 1].
///
/// P_n(w|x) depends only on x_n, so the region factors: x0 must lie in an
/// admissible set of the azimuthal axis and x1 in one of the zenithal axis.
/// Each set is found by minimizing/maximizing P_n over a hemisphere grid of
/// events (with local refinement) on a scan of x, then bisecting the transitions.
struct PositivityRegion {
  ModelParams params;
  AdmissibleSet x0_set;
  AdmissibleSet x1_set;
  /// Preparation map on a (theta_v, phi_v) grid.
  std::vector<RegionSample> samples;
  int theta_steps = 0;
  int phi_steps = 0;

  bool contains(const BlochVector& v) const;
  /// Largest theta_v marked valid on the map (cone half-angle for the base model).
  double max_valid_theta() const;
};

struct RegionOptions {
  int x_scan = 512;         // scan points per ontic axis
  int event_polar = 24;     // hemisphere grid for the event minimization
  int event_azimuth = 48;
  double tolerance = 1e-12; // slack on [0, 1]
};

/// min and max over events of P_n(w|x), w on the closed upper hemisphere.
/// With the complement rule this bounds every event on the sphere.
std::pair<double, double> event_extremes(Branch n, double x, const ModelParams& p,
                                         const RegionOptions& opt = {});

/// `resolution` is the side of the (theta_v, phi_v) map; phi uses 2x resolution.
PositivityRegion positivity_region(const ModelParams& p, int resolution,
                                   const RegionOptions& opt = {});

/// A family member with its positivity region mapped once.
class FamilyModel {
 public:
  explicit FamilyModel(const ModelParams& p, int resolution = 64);

  const ModelParams& params() const { return region_.params; }
  const PositivityRegion& region() const { return region_; }

  bool admissible(Branch n, double x) const;

  /// Throws ValidityError when (x, n) lies outside the mapped region.
  double response(const BlochVector& w, Branch n, double x) const;

  /// Two-point density at (x0, x1) = bloch_to_coord(v).
  /// Throws ValidityError outside the region.
  TwoPointDistribution prepare_density(const BlochVector& v) const;

  double combined_probability(const BlochVector& w, const BlochVector& v) const;

 private:
  PositivityRegion region_;
};

}  // namespace ontoqubit

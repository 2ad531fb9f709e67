#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "ontoqubit/geometry.hpp"
#include "ontoqubit/linalg.hpp"

namespace ontoqubit {

enum class Generator { kIdentity, kSigmaX, kSigmaY, kSigmaZ };

std::string to_string(Generator g);

/// Exact flow of the Bloch vector: rotation about the generator axis by angle t,
/// normalized so that for sigma_y dv_x/dt = v_z and dv_z/dt = -v_x.
/// Equivalent to the spinor evolution exp(-i t sigma / 2).
BlochVector bloch_flow(Generator g, double t, const BlochVector& v);

/// exp(-i t H) phi. Throws std::invalid_argument for non-Hermitian H,
/// mismatched sizes, or phi off unit norm by more than kRenormalizeTol.
ComplexVector evolve_axis(const ComplexMatrix& h, double t, const ComplexVector& phi);

/// Discretized ontic space: G0 uniform points on [0, 2pi) for branch 0 followed
/// by G1 uniform points on [0, arccos(3/5)] (endpoints included) for branch 1.
class OnticGrid {
 public:
  /// Throws std::invalid_argument for g0 < 1 or g1 < 2.
  OnticGrid(int g0, int g1);

  int g0() const { return g0_; }
  int g1() const { return g1_; }
  int size() const { return g0_ + g1_; }
  double azimuth_step() const { return kTwoPi / g0_; }
  double zenith_step() const;
  double azimuth_point(int k) const { return k * azimuth_step(); }
  double zenith_point(int j) const { return j * zenith_step(); }

  /// Index of the nearest azimuthal point (cyclic) and zenithal point (clamped).
  int nearest_azimuth(double phi) const;
  int nearest_zenith(double theta) const;

 private:
  int g0_;
  int g1_;
};

/// Length-G probability vector: sin(theta) at the nearest azimuth bin, 1 - sin(theta)
/// at the nearest zenith bin. Throws ValidityError outside the cone.
Eigen::VectorXd snap(const BlochVector& v, const OnticGrid& grid);

/// Column-stochastic nonnegative matrix.
class KernelMatrix {
 public:
  static constexpr double kStochasticTol = 1e-9;

  /// Throws std::invalid_argument for non-square input, negative entries or
  /// column sums off 1 by more than kStochasticTol.
  explicit KernelMatrix(Eigen::MatrixXd m);
  static KernelMatrix identity(int n);

  const Eigen::MatrixXd& matrix() const { return m_; }
  int size() const { return static_cast<int>(m_.rows()); }

  /// Largest violation of nonnegativity or column normalization.
  double stochastic_defect() const;

 private:
  Eigen::MatrixXd m_;
};

/// Throws std::invalid_argument on dimension mismatch.
KernelMatrix compose_kernels(const KernelMatrix& k1, const KernelMatrix& k2);

/// Euclidean projection of a vector onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y);

struct StateEnsemble {
  std::vector<BlochVector> states;
  /// Columns are snap(states[i]).
  Eigen::MatrixXd snapped;
};

/// Grid-aligned product ensemble: azimuths on grid points, zeniths on grid points
/// with 0 < theta <= arccos(3/5) - margin. Throws std::invalid_argument when fewer
/// than n_theta zenith points fit.
StateEnsemble make_ensemble(const OnticGrid& grid, int n_theta, int n_phi, double margin);

struct FitOptions {
  int budget = 50000;
  /// Stop once the RMS residual falls below this.
  double target = 1e-14;
};

struct KernelFit {
  KernelMatrix kernel;
  double residual = 0.0;   // sqrt(mean_v ||K rho_v - rho_{Uv}||^2)
  int iterations = 0;
  bool budget_exhausted = false;
};

/// Accelerated projected gradient (with adaptive restart) on ||K A - B||_F^2 over
/// column-stochastic K, starting from the uniform kernel. Columns of A are the
/// ensemble's snapped states, columns of B the snapped evolved states.
/// Deterministic; on budget exhaustion the best iterate is returned and flagged.
KernelFit fit_kernel(Generator g, double t, const StateEnsemble& ensemble, const OnticGrid& grid,
                     const FitOptions& opt = {});

/// Least-squares kernel fit for explicit data matrices.
KernelFit fit_stochastic(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const FitOptions& opt = {});

struct GapConfig {
  int n_theta = 8;
  int n_phi = 8;
  FitOptions fit;
};

struct GapRow {
  Generator generator = Generator::kIdentity;
  int g0 = 0;
  int g1 = 0;
  int ensemble_size = 0;
  double t = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// One fit per resolution (G0 = G1 = r), with t equal to one azimuth step
/// (t = 0 for the identity) and the ensemble confined to theta <= arccos(3/5) - t
/// so evolved states stay in the cone. Resolutions run concurrently.
std::vector<GapRow> markov_gap(Generator g, const std::vector<int>& resolutions, const GapConfig& cfg = {});

/// "generator,G0,G1,ensemble_size,t,residual,iterations" plus one line per row.
std::string gap_rows_csv(const std::vector<GapRow>& rows);

}  // namespace ontoqubit

#include "ontoqubit/markov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ontoqubit/base_model.hpp"
#include "ontoqubit/parallel.hpp"

namespace ontoqubit {

std::string to_string(Generator g) {
  switch (g) {
    case Generator::kIdentity: return "identity";
    case Generator::kSigmaX: return "sigma_x";
    case Generator::kSigmaY: return "sigma_y";
    case Generator::kSigmaZ: return "sigma_z";
  }
  return "unknown";
}

BlochVector bloch_flow(Generator g, double t, const BlochVector& v) {
  switch (g) {
    case Generator::kIdentity: return v;
    case Generator::kSigmaX: return Rotation3::about_axis(Eigen::Vector3d::UnitX(), t).apply(v);
    case Generator::kSigmaY: return Rotation3::about_axis(Eigen::Vector3d::UnitY(), t).apply(v);
    case Generator::kSigmaZ: return Rotation3::about_axis(Eigen::Vector3d::UnitZ(), t).apply(v);
  }
  return v;
}

ComplexVector evolve_axis(const ComplexMatrix& h, double t, const ComplexVector& phi) {
  if (h.rows() != phi.size()) throw std::invalid_argument("evolve_axis: dimension mismatch");
  const double norm = phi.norm();
  if (!(std::abs(norm - 1.0) <= kRenormalizeTol)) {
    throw std::invalid_argument("evolve_axis: state is not normalized");
  }
  return unitary_exponential(h, t) * (phi / norm);
}

OnticGrid::OnticGrid(int g0, int g1) : g0_(g0), g1_(g1) {
  if (g0 < 1 || g1 < 2) throw std::invalid_argument("OnticGrid: need G0 >= 1 and G1 >= 2");
}

double OnticGrid::zenith_step() const { return kConeHalfAngle / (g1_ - 1); }

int OnticGrid::nearest_azimuth(double phi) const {
  const long k = std::lround(phi / azimuth_step());
  return static_cast<int>(((k % g0_) + g0_) % g0_);
}

int OnticGrid::nearest_zenith(double theta) const {
  const long j = std::lround(theta / zenith_step());
  return static_cast<int>(std::clamp<long>(j, 0, g1_ - 1));
}

Eigen::VectorXd snap(const BlochVector& v, const OnticGrid& grid) {
  const TwoPointDistribution d = prepare_density(v);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.size());
  out(grid.nearest_azimuth(d.point0)) += d.weight0;
  out(grid.g0() + grid.nearest_zenith(d.point1)) += d.weight1;
  return out;
}

KernelMatrix::KernelMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("KernelMatrix: matrix must be square");
  if (!(stochastic_defect() <= kStochasticTol)) {
    throw std::invalid_argument("KernelMatrix: matrix is not column-stochastic");
  }
}

KernelMatrix KernelMatrix::identity(int n) { return KernelMatrix(Eigen::MatrixXd::Identity(n, n)); }

double KernelMatrix::stochastic_defect() const {
  if (m_.size() == 0) return 0.0;
  const double neg = std::max(0.0, -m_.minCoeff());
  const double sums = (m_.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(neg, sums);
}

KernelMatrix compose_kernels(const KernelMatrix& k1, const KernelMatrix& k2) {
  if (k1.size() != k2.size()) throw std::invalid_argument("compose_kernels: dimension mismatch");
  return KernelMatrix(k1.matrix() * k2.matrix());
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y) {
  const Eigen::Index n = y.size();
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  return (y.array() - tau).cwiseMax(0.0);
}

StateEnsemble make_ensemble(const OnticGrid& grid, int n_theta, int n_phi, double margin) {
  if (n_theta < 1 || n_phi < 1 || n_phi > grid.g0()) {
    throw std::invalid_argument("make_ensemble: bad ensemble dimensions");
  }
  const int j_max = static_cast<int>(std::floor((kConeHalfAngle - margin) / grid.zenith_step() + 1e-9));
  if (j_max < n_theta) {
    throw std::invalid_argument("make_ensemble: not enough zenith grid points inside the cone");
  }
  StateEnsemble ens;
  ens.snapped.resize(grid.size(), static_cast<Eigen::Index>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const int j = n_theta == 1 ? 1 : 1 + static_cast<int>(std::lround(double(i) * (j_max - 1) / (n_theta - 1)));
    for (int l = 0; l < n_phi; ++l) {
      const int k = static_cast<int>(std::lround(double(l) * grid.g0() / n_phi)) % grid.g0();
      const BlochVector v = from_spherical({grid.zenith_point(j), grid.azimuth_point(k)});
      ens.snapped.col(static_cast<Eigen::Index>(ens.states.size())) = snap(v, grid);
      ens.states.push_back(v);
    }
  }
  return ens;
}

KernelFit fit_stochastic(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const FitOptions& opt) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.cols() == 0) {
    throw std::invalid_argument("fit_stochastic: data matrices must have equal, nonzero shape");
  }
  const Eigen::Index g = a.rows();
  const double samples = static_cast<double>(a.cols());
  const Eigen::MatrixXd gram = a * a.transpose();
  const Eigen::MatrixXd cross = b * a.transpose();
  const double lipschitz = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().maxCoeff();

  auto objective = [&](const Eigen::MatrixXd& k) { return (k * a - b).squaredNorm(); };
  auto project = [&](Eigen::MatrixXd y) {
    for (Eigen::Index j = 0; j < g; ++j) y.col(j) = project_to_simplex(y.col(j));
    return y;
  };

  Eigen::MatrixXd k = Eigen::MatrixXd::Constant(g, g, 1.0 / static_cast<double>(g));
  Eigen::MatrixXd y = k;
  double f = objective(k);
  Eigen::MatrixXd best = k;
  double best_f = f;
  double momentum = 1.0;

  constexpr int kStallWindow = 2000;
  double window_start_f = best_f;
  int it = 0;
  bool converged = std::sqrt(best_f / samples) <= opt.target;
  for (; it < opt.budget && !converged; ++it) {
    const Eigen::MatrixXd grad = 2.0 * (y * gram - cross);
    Eigen::MatrixXd next = project(y - grad / lipschitz);
    const double next_f = objective(next);
    if (next_f > f) {
      // Function-value restart: drop the momentum and retry from the current iterate.
      momentum = 1.0;
      y = k;
      continue;
    }
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / next_momentum) * (next - k);
    momentum = next_momentum;
    k = std::move(next);
    f = next_f;
    if (f < best_f) {
      best_f = f;
      best = k;
    }
    converged = std::sqrt(best_f / samples) <= opt.target;
    if ((it + 1) % kStallWindow == 0) {
      if (window_start_f - best_f <= 1e-13 * std::max(window_start_f, 1e-300)) break;
      window_start_f = best_f;
    }
  }
  KernelFit out{KernelMatrix(best), std::sqrt(best_f / samples), it, false};
  out.budget_exhausted = it >= opt.budget && !converged;
  return out;
}

KernelFit fit_kernel(Generator g, double t, const StateEnsemble& ensemble, const OnticGrid& grid,
                     const FitOptions& opt) {
  Eigen::MatrixXd target(grid.size(), static_cast<Eigen::Index>(ensemble.states.size()));
  for (std::size_t i = 0; i < ensemble.states.size(); ++i) {
    target.col(static_cast<Eigen::Index>(i)) = snap(bloch_flow(g, t, ensemble.states[i]), grid);
  }
  return fit_stochastic(ensemble.snapped, target, opt);
}

std::vector<GapRow> markov_gap(Generator g, const std::vector<int>& resolutions, const GapConfig& cfg) {
  std::vector<GapRow> rows(resolutions.size());
  parallel_for(resolutions.size(), [&](std::size_t i) {
    const OnticGrid grid(resolutions[i], resolutions[i]);
    const double step = grid.azimuth_step();
    const double t = g == Generator::kIdentity ? 0.0 : step;
    const StateEnsemble ens = make_ensemble(grid, cfg.n_theta, cfg.n_phi, step);
    const KernelFit fit = fit_kernel(g, t, ens, grid, cfg.fit);
    rows[i] = {g, grid.g0(), grid.g1(), static_cast<int>(ens.states.size()), t, fit.residual, fit.iterations};
  });
  return rows;
}

std::string gap_rows_csv(const std::vector<GapRow>& rows) {
  std::ostringstream out;
  out << "generator,G0,G1,ensemble_size,t,residual,iterations\n" << std::setprecision(17);
  for (const GapRow& r : rows) {
    out << to_string(r.generator) << ',' << r.g0 << ',' << r.g1 << ',' << r.ensemble_size << ',' << r.t
        << ',' << r.residual << ',' << r.iterations << '\n';
  }
  return out.str();
}

}  // namespace ontoqubit

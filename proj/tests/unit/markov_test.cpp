#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ontoqubit/base_model.hpp"
#include "ontoqubit/errors.hpp"
#include "ontoqubit/group_checks.hpp"
#include "ontoqubit/markov.hpp"
#include "support.hpp"

namespace ontoqubit {
namespace {

using testing::for_all;
using testing::random_unit;

// Simplex projection by bisection on the threshold; independent of the sort-based routine.
Eigen::VectorXd bisection_projection(const Eigen::VectorXd& y) {
  double lo = y.minCoeff() - 1.0;
  double hi = y.maxCoeff();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((y.array() - mid).cwiseMax(0.0).sum() > 1.0 ? lo : hi) = mid;
  }
  return (y.array() - 0.5 * (lo + hi)).cwiseMax(0.0);
}

TEST(BlochFlowTest, ZeroTimeIsIdentity) {
  const BlochVector v = from_spherical({0.4, 1.0});
  for (Generator g : {Generator::kSigmaX, Generator::kSigmaY, Generator::kSigmaZ}) {
    EXPECT_LT((bloch_flow(g, 0.0, v).vec() - v.vec()).norm(), 1e-15);
  }
}

TEST(BlochFlowTest, SigmaYFirstOrderFromNorthPole) {
  const double t = 1e-4;
  const BlochVector v = bloch_flow(Generator::kSigmaY, t, BlochVector::unit_z());
  EXPECT_NEAR(v.x(), t, 1e-12);
  EXPECT_NEAR(v.z(), 1.0, 1e-8);
  EXPECT_NEAR(v.y(), 0.0, 1e-15);
}

TEST(BlochFlowTest, SphericalRatesByFiniteDifferences) {
  // For the sigma_y flow: dtheta/dt = cos(phi), dphi/dt = -cot(theta) sin(phi).
  for_all(61, "der-sc", 200, [](RngStream& rng) {
    const BlochVector v = from_spherical({0.3 + 2.5 * rng.uniform(), 0.2 + 5.8 * rng.uniform()});
    const SphericalAngles a = to_spherical(v);
    const double h = 1e-6;
    const SphericalAngles plus = to_spherical(bloch_flow(Generator::kSigmaY, h, v));
    const SphericalAngles minus = to_spherical(bloch_flow(Generator::kSigmaY, -h, v));
    const double dtheta = (plus.theta - minus.theta) / (2.0 * h);
    const double dphi = std::remainder(plus.phi - minus.phi, kTwoPi) / (2.0 * h);
    EXPECT_NEAR(dtheta, std::cos(a.phi), 1e-6);
    EXPECT_NEAR(dphi, -std::sin(a.phi) / std::tan(a.theta), 1e-6);
  });
}

TEST(BlochFlowTest, SigmaZShiftsAzimuth) {
  const BlochVector v = from_spherical({0.5, 1.0});
  const SphericalAngles a = to_spherical(bloch_flow(Generator::kSigmaZ, 0.25, v));
  EXPECT_NEAR(a.theta, 0.5, 1e-14);
  EXPECT_NEAR(a.phi, 1.25, 1e-14);
}

TEST(EvolveAxisTest, TrivialCases) {
  ComplexVector up(2);
  up << 1.0, 0.0;
  EXPECT_LT((evolve_axis(ComplexMatrix::Zero(2, 2), 3.0, up) - up).norm(), 1e-15);
  EXPECT_NEAR(std::abs(up.dot(evolve_axis(pauli(3), kPi / 2.0, up))), 1.0, 1e-15);
}

TEST(EvolveAxisTest, SpinorMatchesBlochFlowAtTwiceTheTime) {
  // exp(-i t sigma) rotates the Bloch vector by 2t about the sigma axis.
  ComplexVector up(2);
  up << 1.0, 0.0;
  for (double t : {0.1, 0.7, 2.0}) {
    const BlochVector img = bloch_from_spinor(evolve_axis(pauli(2), t, up));
    EXPECT_LT((img.vec() - bloch_flow(Generator::kSigmaY, 2.0 * t, BlochVector::unit_z()).vec()).norm(), 1e-10);
  }
  for_all(62, "spinor-flow", 200, [](RngStream& rng) {
    const BlochVector v = random_unit(rng);
    const double t = kTwoPi * rng.uniform();
    const Generator gens[] = {Generator::kSigmaX, Generator::kSigmaY, Generator::kSigmaZ};
    const int k = static_cast<int>(rng() % 3);
    const ComplexVector out = evolve_axis(pauli(k + 1), 0.5 * t, spinor_from_bloch(v));
    EXPECT_NEAR(out.norm(), 1.0, 1e-12);
    EXPECT_LT((bloch_from_spinor(out).vec() - bloch_flow(gens[k], t, v).vec()).norm(), 1e-10);
  });
}

TEST(EvolveAxisTest, RejectsBadInput) {
  ComplexVector up(2);
  up << 1.0, 0.0;
  ComplexMatrix h = pauli(1);
  h(0, 1) = 2.0;
  EXPECT_THROW(evolve_axis(h, 1.0, up), std::invalid_argument);
  EXPECT_THROW(evolve_axis(pauli(1), 1.0, 2.0 * up), std::invalid_argument);
  EXPECT_THROW(evolve_axis(ComplexMatrix::Identity(3, 3), 1.0, up), std::invalid_argument);
}

TEST(OnticGridTest, NearestPoints) {
  const OnticGrid g(16, 9);
  EXPECT_EQ(g.size(), 25);
  EXPECT_NEAR(g.zenith_point(8), kConeHalfAngle, 1e-15);
  EXPECT_EQ(g.nearest_azimuth(kTwoPi - 1e-9), 0);
  EXPECT_EQ(g.nearest_azimuth(g.azimuth_point(5) + 0.4 * g.azimuth_step()), 5);
  EXPECT_EQ(g.nearest_zenith(2.0), 8);
  EXPECT_EQ(g.nearest_zenith(-0.1), 0);
  EXPECT_THROW(OnticGrid(0, 4), std::invalid_argument);
  EXPECT_THROW(OnticGrid(4, 1), std::invalid_argument);
}

TEST(SnapTest, NorthPoleAndNormalization) {
  const OnticGrid g(16, 16);
  const Eigen::VectorXd z = snap(BlochVector::unit_z(), g);
  EXPECT_EQ(z(16), 1.0);
  EXPECT_EQ(z.sum(), 1.0);
  for_all(63, "snap", 200, [&](RngStream& rng) {
    const Eigen::VectorXd s = snap(testing::random_in_cone(rng), g);
    EXPECT_NEAR(s.sum(), 1.0, 1e-15);
    EXPECT_LE((s.array() != 0.0).count(), 2);
  });
  EXPECT_THROW(snap(BlochVector::unit_x(), g), ValidityError);
}

TEST(SnapTest, GridAlignedStateLandsOnItsBins) {
  const OnticGrid g(16, 16);
  const BlochVector v = from_spherical({g.zenith_point(5), g.azimuth_point(3)});
  const Eigen::VectorXd s = snap(v, g);
  EXPECT_NEAR(s(3), std::sin(g.zenith_point(5)), 1e-15);
  EXPECT_NEAR(s(16 + 5), 1.0 - std::sin(g.zenith_point(5)), 1e-15);
}

TEST(KernelMatrixTest, ValidationAndComposition) {
  EXPECT_THROW(KernelMatrix(Eigen::MatrixXd::Constant(2, 2, 0.3)), std::invalid_argument);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.5, 0.0, -0.5, 1.0;
  EXPECT_THROW(KernelMatrix{neg}, std::invalid_argument);
  EXPECT_THROW(KernelMatrix(Eigen::MatrixXd::Identity(2, 3)), std::invalid_argument);

  RngStream rng(64);
  auto random_kernel = [&](int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform();
    m.array().rowwise() /= m.colwise().sum().array();
    return KernelMatrix(m);
  };
  const KernelMatrix k = random_kernel(6);
  EXPECT_LT((compose_kernels(k, KernelMatrix::identity(6)).matrix() - k.matrix()).norm(), 1e-15);
  EXPECT_LT(compose_kernels(k, random_kernel(6)).stochastic_defect(), 1e-9);
  EXPECT_THROW(compose_kernels(k, KernelMatrix::identity(5)), std::invalid_argument);
}

TEST(KernelMatrixTest, PermutationsCompose) {
  auto shift = [](int n, int by) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) m((j + by) % n, j) = 1.0;
    return KernelMatrix(m);
  };
  EXPECT_EQ(compose_kernels(shift(7, 2), shift(7, 3)).matrix(), shift(7, 5).matrix());
}

TEST(ProjectToSimplexTest, AgreesWithBisection) {
  Eigen::VectorXd a(2);
  a << 0.5, 0.5;
  EXPECT_LT((project_to_simplex(a) - a).norm(), 1e-15);
  Eigen::VectorXd b(2);
  b << 2.0, 0.0;
  EXPECT_LT((project_to_simplex(b) - Eigen::Vector2d(1.0, 0.0)).norm(), 1e-15);
  for_all(65, "simplex", 500, [](RngStream& rng) {
    Eigen::VectorXd y(9);
    for (int i = 0; i < 9; ++i) y(i) = 3.0 * rng.normal();
    const Eigen::VectorXd x = project_to_simplex(y);
    EXPECT_NEAR(x.sum(), 1.0, 1e-12);
    EXPECT_GE(x.minCoeff(), 0.0);
    EXPECT_LT((x - bisection_projection(y)).norm(), 1e-10);
  });
}

TEST(MakeEnsembleTest, GridAlignedInsideMargin) {
  const OnticGrid g(16, 16);
  const StateEnsemble e = make_ensemble(g, 8, 8, g.azimuth_step());
  ASSERT_EQ(e.states.size(), 64u);
  for (std::size_t i = 0; i < e.states.size(); ++i) {
    const SphericalAngles a = to_spherical(e.states[i]);
    EXPECT_GT(a.theta, 0.0);
    EXPECT_LE(a.theta, kConeHalfAngle - g.azimuth_step() + 1e-12);
    EXPECT_NEAR(e.snapped.col(static_cast<Eigen::Index>(i)).sum(), 1.0, 1e-15);
  }
  EXPECT_THROW(make_ensemble(g, 20, 8, g.azimuth_step()), std::invalid_argument);
}

TEST(FitTest, RecoversAKnownStochasticKernel) {
  RngStream rng(66);
  const int n = 6;
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < k.size(); ++i) k.data()[i] = rng.uniform();
  k.array().rowwise() /= k.colwise().sum().array();
  Eigen::MatrixXd a(n, 12);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = rng.uniform();
  a.array().rowwise() /= a.colwise().sum().array();
  const KernelFit fit = fit_stochastic(a, k * a);
  EXPECT_LT(fit.residual, 1e-8);
  EXPECT_LT((fit.kernel.matrix() - k).norm(), 1e-6);
}

TEST(FitTest, IdentityAndSigmaZAreExact) {
  const OnticGrid g(16, 16);
  const StateEnsemble e = make_ensemble(g, 8, 8, g.azimuth_step());
  const KernelFit id = fit_kernel(Generator::kIdentity, 0.0, e, g);
  const KernelFit z = fit_kernel(Generator::kSigmaZ, g.azimuth_step(), e, g);
  EXPECT_LT(id.residual, 1e-9);
  EXPECT_LT(z.residual, 1e-9);
  EXPECT_FALSE(z.budget_exhausted);
  EXPECT_LT(z.kernel.stochastic_defect(), 1e-9);
}

TEST(FitTest, SigmaYLeavesAResidual) {
  const OnticGrid g(16, 16);
  const StateEnsemble e = make_ensemble(g, 8, 8, g.azimuth_step());
  FitOptions opt;
  opt.budget = 3000;
  const KernelFit y = fit_kernel(Generator::kSigmaY, g.azimuth_step(), e, g, opt);
  EXPECT_GT(y.residual, 0.1);
  EXPECT_LT(y.kernel.stochastic_defect(), 1e-9);
  EXPECT_TRUE(y.budget_exhausted || y.iterations < opt.budget);
}

TEST(MarkovGapTest, SigmaZVanishesAtEveryResolution) {
  const std::vector<GapRow> rows = markov_gap(Generator::kSigmaZ, {16, 24, 32});
  ASSERT_EQ(rows.size(), 3u);
  for (const GapRow& r : rows) {
    EXPECT_LT(r.residual, 1e-9);
    EXPECT_EQ(r.ensemble_size, 64);
    EXPECT_NEAR(r.t, kTwoPi / r.g0, 1e-15);
  }
  const std::vector<GapRow> id = markov_gap(Generator::kIdentity, {16});
  EXPECT_EQ(id[0].t, 0.0);
  EXPECT_LT(id[0].residual, 1e-9);
}

TEST(MarkovGapTest, CsvShape) {
  const std::string csv = gap_rows_csv(markov_gap(Generator::kSigmaZ, {16, 32}));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "generator,G0,G1,ensemble_size,t,residual,iterations");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

}  // namespace
}  // namespace ontoqubit

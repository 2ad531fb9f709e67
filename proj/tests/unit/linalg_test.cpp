#include <gtest/gtest.h>

#include <complex>

#include "ontoqubit/group_checks.hpp"
#include "ontoqubit/linalg.hpp"

namespace ontoqubit {
namespace {

using cd = std::complex<double>;

TEST(UnitaryExponentialTest, ZeroHamiltonianIsIdentity) {
  const ComplexMatrix u = unitary_exponential(ComplexMatrix::Zero(3, 3), 2.0);
  EXPECT_LT((u - ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(UnitaryExponentialTest, PauliClosedForm) {
  // exp(-i t sigma) = cos t I - i sin t sigma for any Pauli matrix.
  for (int k = 1; k <= 3; ++k) {
    for (double t : {0.3, 1.7, -2.2}) {
      const ComplexMatrix expected = std::cos(t) * ComplexMatrix::Identity(2, 2) - cd(0, std::sin(t)) * pauli(k);
      EXPECT_LT((unitary_exponential(pauli(k), t) - expected).norm(), 1e-14);
    }
  }
}

TEST(UnitaryExponentialTest, UnitaryForRandomHermitian) {
  ComplexMatrix a = ComplexMatrix::Random(4, 4);
  const ComplexMatrix h = a + a.adjoint();
  const ComplexMatrix u = unitary_exponential(h, 0.9);
  EXPECT_LT(unitarity_defect(u), 1e-13);
  // Group property exp(-i(s+t)H) = exp(-isH) exp(-itH).
  EXPECT_LT((unitary_exponential(h, 1.5) - unitary_exponential(h, 0.6) * u).norm(), 1e-12);
}

TEST(UnitaryExponentialTest, RejectsNonHermitian) {
  ComplexMatrix h = pauli(1);
  h(0, 1) = cd(1.0, 0.5);
  EXPECT_THROW(unitary_exponential(h, 1.0), std::invalid_argument);
  EXPECT_THROW(unitary_exponential(ComplexMatrix::Zero(2, 3), 1.0), std::invalid_argument);
}

TEST(NumericalRankTest, CountsIndependentColumns) {
  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 0, 1, 1;
  EXPECT_EQ(numerical_rank(m, 1e-9), 2);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Identity(5, 5), 1e-9), 5);
}

}  // namespace
}  // namespace ontoqubit

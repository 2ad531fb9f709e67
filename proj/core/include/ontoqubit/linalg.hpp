#pragma once

#include <Eigen/Core>
#include <complex>

namespace ontoqubit {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;

/// max |H - H^dagger|.
double hermiticity_defect(const ComplexMatrix& h);
/// max |U^dagger U - I|.
double unitarity_defect(const ComplexMatrix& u);

/// exp(-i t H) for Hermitian H, via the self-adjoint eigendecomposition.
/// Throws std::invalid_argument when H is not square or not Hermitian within kHermitianTol.
ComplexMatrix unitary_exponential(const ComplexMatrix& h, double t);

/// Numerical rank: number of singular values above threshold.
int numerical_rank(const Eigen::MatrixXd& m, double threshold);

}  // namespace ontoqubit

#include "ontoqubit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <limits>
#include <stdexcept>

namespace ontoqubit {

double hermiticity_defect(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  if (u.size() == 0) return 0.0;
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

ComplexMatrix unitary_exponential(const ComplexMatrix& h, double t) {
  if (h.rows() != h.cols()) throw std::invalid_argument("unitary_exponential: matrix is not square");
  if (!(hermiticity_defect(h) <= kHermitianTol)) {
    throw std::invalid_argument("unitary_exponential: matrix is not Hermitian");
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sym);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  Eigen::VectorXcd phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) phases(k) = std::polar(1.0, -t * lambda(k));
  const ComplexMatrix& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

int numerical_rank(const Eigen::MatrixXd& m, double threshold) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > threshold ? 1 : 0;
  return rank;
}

}  // namespace ontoqubit

#include "ontoqubit/geometry.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ontoqubit {

BlochVector::BlochVector(double x, double y, double z) : v_(x, y, z) {
  const double norm = v_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kRenormalizeTol) {
    throw std::invalid_argument("BlochVector: norm " + std::to_string(norm) + " is not 1");
  }
  if (norm != 1.0) v_ /= norm;
}

Rotation3::Rotation3(const Eigen::Matrix3d& m) : m_(m) {
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det = m.determinant();
  if (!(ortho <= kGeometryTol) || !(std::abs(det - 1.0) <= kGeometryTol)) {
    throw std::invalid_argument("Rotation3: matrix is not in SO(3)");
  }
}

Rotation3 Rotation3::about_axis(const Eigen::Vector3d& axis, double angle) {
  return Rotation3(Exact{}, Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix());
}

BlochVector Rotation3::apply(const BlochVector& v) const { return BlochVector(m_ * v.vec()); }

BlochVector Rotation3::apply_inverse(const BlochVector& v) const {
  return BlochVector(m_.transpose() * v.vec());
}

double azimuth(double x, double y) {
  if (x == 0.0 && y == 0.0) return 0.0;
  double a = std::atan2(y, x);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi || a == 0.0) a = 0.0;
  return a;
}

double born_probability(const BlochVector& w, const BlochVector& v) {
  const double d = std::clamp(w.dot(v), -1.0, 1.0);
  // q lies in [0.5, 1], so 1 - q is exact and q + (1 - q) == 1.
  const double q = 0.5 + 0.5 * std::abs(d);
  return d >= 0.0 ? q : 1.0 - q;
}

SphericalAngles to_spherical(const BlochVector& v) {
  const double rho = std::hypot(v.x(), v.y());
  SphericalAngles a;
  a.theta = std::atan2(rho, v.z());
  a.phi = azimuth(v.x(), v.y());
  return a;
}

BlochVector from_spherical(const SphericalAngles& a) {
  if (!(a.theta >= 0.0 && a.theta <= kPi)) {
    throw std::invalid_argument("from_spherical: theta outside [0, pi]");
  }
  if (!(a.phi >= 0.0 && a.phi < kTwoPi)) {
    throw std::invalid_argument("from_spherical: phi outside [0, 2pi)");
  }
  const double st = std::sin(a.theta);
  return {st * std::cos(a.phi), st * std::sin(a.phi), std::cos(a.theta)};
}

namespace {

Eigen::Matrix3d half_turn(const Eigen::Vector3d& u) {
  return 2.0 * u * u.transpose() - Eigen::Matrix3d::Identity();
}

Eigen::Vector3d fixed_perpendicular(const Eigen::Vector3d& a) {
  Eigen::Vector3d p = Eigen::Vector3d::UnitX().cross(a);
  if (p.norm() < 0.5) p = Eigen::Vector3d::UnitY().cross(a);
  return p.normalized();
}

// Two half-turns, about a and then about the bisector h of (a, b), compose to
// the rotation about a x b by the angle between them. Orthogonal by construction.
Eigen::Matrix3d bisector_rotation(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d h = (a + b).normalized();
  return half_turn(h) * half_turn(a);
}

}  // namespace

Rotation3 rotation_taking(const BlochVector& a, const BlochVector& b) {
  if (a == b) return Rotation3();
  const Eigen::Vector3d& av = a.vec();
  const Eigen::Vector3d& bv = b.vec();
  if ((av + bv).norm() >= 1e-6) return Rotation3(bisector_rotation(av, bv));
  // Near-antipodal: half-turn about a fixed perpendicular sends a to -a, then a
  // well-conditioned bisector rotation takes -a to b.
  const Eigen::Matrix3d flip = half_turn(fixed_perpendicular(av));
  const Eigen::Vector3d neg = -av;
  const Eigen::Matrix3d rest = neg == bv ? Eigen::Matrix3d::Identity() : bisector_rotation(neg, bv);
  return Rotation3(rest * flip);
}

double angular_distance(const BlochVector& a, const BlochVector& b) {
  return std::atan2(a.vec().cross(b.vec()).norm(), a.dot(b));
}

Spinor spinor_from_bloch(const BlochVector& v) {
  const SphericalAngles a = to_spherical(v);
  return Spinor(std::cos(a.theta / 2.0), std::polar(std::sin(a.theta / 2.0), a.phi));
}

BlochVector bloch_from_spinor(const Spinor& psi) {
  const std::complex<double> cross = std::conj(psi(0)) * psi(1);
  return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(psi(0)) - std::norm(psi(1))};
}

}  // namespace ontoqubit

#pragma once

#include <Eigen/Core>
#include <complex>
#include <numbers>

namespace ontoqubit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance for geometric identities (norms, orthogonality, round trips).
inline constexpr double kGeometryTol = 1e-12;
/// Inputs whose norm is within this distance of 1 are renormalized;
/// anything further away is rejected.
inline constexpr double kRenormalizeTol = 1e-9;

/// Unit 3-vector: a pure qubit state or a rank-1 projective event.
class BlochVector {
 public:
  /// Throws std::invalid_argument when | |v| - 1 | > kRenormalizeTol.
  BlochVector(double x, double y, double z);
  explicit BlochVector(const Eigen::Vector3d& v) : BlochVector(v.x(), v.y(), v.z()) {}

  static BlochVector unit_x() { return {1.0, 0.0, 0.0}; }
  static BlochVector unit_y() { return {0.0, 1.0, 0.0}; }
  static BlochVector unit_z() { return {0.0, 0.0, 1.0}; }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  const Eigen::Vector3d& vec() const { return v_; }

  double dot(const BlochVector& o) const { return v_.dot(o.v_); }

  // Negation is exact, so -(-v) == v bitwise.
  BlochVector operator-() const { return BlochVector(Exact{}, -v_); }

  friend bool operator==(const BlochVector& a, const BlochVector& b) { return a.v_ == b.v_; }

 private:
  struct Exact {};
  BlochVector(Exact, const Eigen::Vector3d& v) : v_(v) {}
  Eigen::Vector3d v_;
};

/// Zenith theta in [0, pi], azimuth phi in [0, 2pi).
struct SphericalAngles {
  double theta = 0.0;
  double phi = 0.0;
};

/// Proper rotation (orthogonal, det +1).
class Rotation3 {
 public:
  Rotation3() : m_(Eigen::Matrix3d::Identity()) {}
  /// Throws std::invalid_argument unless R^T R = I and det R = +1 within kGeometryTol.
  explicit Rotation3(const Eigen::Matrix3d& m);

  static Rotation3 about_axis(const Eigen::Vector3d& axis, double angle);

  const Eigen::Matrix3d& matrix() const { return m_; }
  BlochVector apply(const BlochVector& v) const;
  /// R^T v, the inverse rotation.
  BlochVector apply_inverse(const BlochVector& v) const;
  Rotation3 inverse() const { return Rotation3(Exact{}, m_.transpose()); }
  Rotation3 operator*(const Rotation3& o) const { return Rotation3(Exact{}, m_ * o.m_); }

 private:
  struct Exact {};
  Rotation3(Exact, const Eigen::Matrix3d& m) : m_(m) {}
  Eigen::Matrix3d m_;
};

/// Azimuth of the planar vector (x, y) folded into [0, 2pi); 0 at the origin.
/// Every angle comparison in the models goes through this helper so that equal
/// inputs give bitwise-equal angles.
double azimuth(double x, double y);

/// Born probability (1 + w.v)/2. Computed so that
/// born_probability(w, v) + born_probability(-w, v) == 1 exactly.
double born_probability(const BlochVector& w, const BlochVector& v);

SphericalAngles to_spherical(const BlochVector& v);
/// Throws std::invalid_argument for theta outside [0, pi] or phi outside [0, 2pi).
BlochVector from_spherical(const SphericalAngles& a);

/// Rotation about a x b taking a onto b. For a = -b the axis is a fixed
/// perpendicular: x-hat crossed with a, or y-hat when a is parallel to x-hat.
Rotation3 rotation_taking(const BlochVector& a, const BlochVector& b);

/// Angle between two unit vectors, accurate near 0 and pi.
double angular_distance(const BlochVector& a, const BlochVector& b);

using Spinor = Eigen::Vector2cd;

/// (cos(theta/2), e^{i phi} sin(theta/2)).
Spinor spinor_from_bloch(const BlochVector& v);
/// <psi|sigma|psi> for a unit spinor.
BlochVector bloch_from_spinor(const Spinor& psi);

}  // namespace ontoqubit

#include <gtest/gtest.h>

#include <Eigen/LU>

#include <complex>

#include "ontoqubit/geometry.hpp"
#include "support.hpp"

namespace ontoqubit {
namespace {

using testing::for_all;
using testing::random_unit;

TEST(BlochVectorTest, RenormalizesNearUnitInput) {
  const BlochVector v(0.0, 0.0, 1.0 + 5e-10);
  EXPECT_DOUBLE_EQ(v.z(), 1.0);
}

TEST(BlochVectorTest, RejectsFarFromUnitInput) {
  EXPECT_THROW(BlochVector(0.0, 0.0, 1.1), std::invalid_argument);
  EXPECT_THROW(BlochVector(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(BornProbabilityTest, IdenticalAndOppositeStates) {
  const BlochVector v = from_spherical({0.7, 2.0});
  EXPECT_EQ(born_probability(v, v), 1.0);
  EXPECT_EQ(born_probability(-v, v), 0.0);
}

TEST(BornProbabilityTest, MatchesSpinorOverlap) {
  // |<up|psi>|^2 for psi = (cos(theta/2), e^{i phi} sin(theta/2)).
  const double theta = kPi / 3.0;
  const std::complex<double> up = std::cos(theta / 2.0);
  EXPECT_NEAR(born_probability(BlochVector::unit_z(), from_spherical({theta, 0.4})), std::norm(up), 1e-15);
  EXPECT_NEAR(born_probability(BlochVector::unit_z(), from_spherical({theta, 0.4})), 0.75, 1e-15);
}

TEST(BornProbabilityTest, ComplementSumsToOneExactly) {
  for_all(11, "born-complement", 2000, [](RngStream& rng) {
    const BlochVector v = random_unit(rng);
    const BlochVector w = random_unit(rng);
    EXPECT_EQ(born_probability(w, v) + born_probability(-w, v), 1.0);
  });
}

TEST(BornProbabilityTest, InvariantUnderJointRotation) {
  for_all(12, "born-rotation", 500, [](RngStream& rng) {
    const BlochVector v = random_unit(rng);
    const BlochVector w = random_unit(rng);
    const Rotation3 r = rotation_taking(random_unit(rng), random_unit(rng));
    EXPECT_NEAR(born_probability(r.apply(w), r.apply(v)), born_probability(w, v), 1e-12);
  });
}

TEST(SphericalTest, KnownPoints) {
  const SphericalAngles z = to_spherical(BlochVector::unit_z());
  EXPECT_EQ(z.theta, 0.0);
  EXPECT_EQ(z.phi, 0.0);
  const SphericalAngles x = to_spherical(BlochVector::unit_x());
  EXPECT_NEAR(x.theta, kPi / 2.0, 1e-15);
  EXPECT_EQ(x.phi, 0.0);
  const SphericalAngles d = to_spherical(BlochVector(0.0, std::sqrt(0.5), std::sqrt(0.5)));
  EXPECT_NEAR(d.theta, kPi / 4.0, 1e-15);
  EXPECT_NEAR(d.phi, kPi / 2.0, 1e-15);
  const SphericalAngles south = to_spherical(-BlochVector::unit_z());
  EXPECT_EQ(south.theta, kPi);
  EXPECT_EQ(south.phi, 0.0);
}

TEST(SphericalTest, FromSphericalKnownPoints) {
  EXPECT_EQ(from_spherical({0.0, 1.3}), BlochVector::unit_z());
  const BlochVector y = from_spherical({kPi / 2.0, kPi / 2.0});
  EXPECT_NEAR(y.x(), 0.0, 1e-15);
  EXPECT_NEAR(y.y(), 1.0, 1e-15);
  EXPECT_NEAR(y.z(), 0.0, 1e-15);
}

TEST(SphericalTest, RejectsOutOfRangeAngles) {
  EXPECT_THROW(from_spherical({-0.1, 0.0}), std::invalid_argument);
  EXPECT_THROW(from_spherical({kPi + 0.1, 0.0}), std::invalid_argument);
  EXPECT_THROW(from_spherical({1.0, kTwoPi}), std::invalid_argument);
  EXPECT_THROW(from_spherical({1.0, -1e-3}), std::invalid_argument);
}

TEST(SphericalTest, RoundTripProperty) {
  for_all(13, "spherical-roundtrip", 1000, [](RngStream& rng) {
    const BlochVector v = random_unit(rng);
    const BlochVector back = from_spherical(to_spherical(v));
    EXPECT_LT((back.vec() - v.vec()).norm(), 1e-12);
  });
}

TEST(RotationTest, IdentityWhenEqual) {
  const BlochVector a = from_spherical({1.1, 0.3});
  const Rotation3 r = rotation_taking(a, a);
  EXPECT_LT((r.matrix() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
}

TEST(RotationTest, ZToXIsQuarterTurnAboutY) {
  const Rotation3 r = rotation_taking(BlochVector::unit_z(), BlochVector::unit_x());
  Eigen::Matrix3d expected;
  expected << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  EXPECT_LT((r.matrix() - expected).norm(), 1e-12);
}

TEST(RotationTest, TakesAToBAndStaysOrthogonal) {
  for_all(14, "rotation-taking", 1000, [](RngStream& rng) {
    const BlochVector a = random_unit(rng);
    const BlochVector b = random_unit(rng);
    const Rotation3 r = rotation_taking(a, b);
    EXPECT_LT((r.apply(a).vec() - b.vec()).norm(), 1e-12);
    EXPECT_LT((r.matrix().transpose() * r.matrix() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
    EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-12);
  });
}

TEST(RotationTest, AntipodalUsesFixedPerpendicular) {
  for (const BlochVector& a : {BlochVector::unit_z(), BlochVector::unit_x(), from_spherical({2.0, 4.0})}) {
    const Rotation3 r = rotation_taking(a, -a);
    EXPECT_LT((r.apply(a).vec() + a.vec()).norm(), 1e-12);
    EXPECT_NEAR(r.matrix().determinant(), 1.0, 1e-12);
    const Rotation3 again = rotation_taking(a, -a);
    EXPECT_EQ(r.matrix(), again.matrix());
  }
}

TEST(RotationTest, RejectsNonRotation) {
  Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
  reflect(2, 2) = -1.0;
  EXPECT_THROW(Rotation3{reflect}, std::invalid_argument);
  EXPECT_THROW(Rotation3{2.0 * Eigen::Matrix3d::Identity()}, std::invalid_argument);
}

TEST(SpinorTest, BlochRoundTrip) {
  for_all(15, "spinor", 500, [](RngStream& rng) {
    const BlochVector v = random_unit(rng);
    EXPECT_LT((bloch_from_spinor(spinor_from_bloch(v)).vec() - v.vec()).norm(), 1e-12);
  });
}

TEST(AngularDistanceTest, MatchesAcosAwayFromEnds) {
  const BlochVector a = from_spherical({0.3, 0.0});
  const BlochVector b = from_spherical({1.2, 0.0});
  EXPECT_NEAR(angular_distance(a, b), 0.9, 1e-14);
  EXPECT_NEAR(angular_distance(a, -a), kPi, 1e-15);
}

}  // namespace
}  // namespace ontoqubit

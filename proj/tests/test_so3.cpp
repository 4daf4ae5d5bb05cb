#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "l1quad/errors.hpp"
#include "l1quad/so3.hpp"

using namespace l1quad;

namespace {

constexpr double kPi = std::numbers::pi;

Mat3 random_rotation(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return exp_map(Vec3(n(rng), n(rng), n(rng)));
}

}  // namespace

TEST(So3, HatZeroIsZero) { EXPECT_TRUE(hat(Vec3::Zero()).isZero(0.0)); }

TEST(So3, HatBasisVector) {
  Mat3 expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  EXPECT_EQ(hat(kE3), expected);
}

TEST(So3, HatVeeRoundTrip) {
  EXPECT_EQ(vee(hat(Vec3(1, 2, 3))), Vec3(1, 2, 3));
  EXPECT_EQ(vee(hat(Vec3(-4, 0, 0.5))), Vec3(-4, 0, 0.5));
  EXPECT_EQ(vee(Mat3::Zero()), Vec3::Zero());
}

TEST(So3, HatMatchesCrossProduct) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 v(u(rng), u(rng), u(rng)), w(u(rng), u(rng), u(rng));
    EXPECT_LE((hat(v) * w - v.cross(w)).norm(), 1e-12);
    const Mat3 h = hat(v);
    EXPECT_TRUE((h + h.transpose()).isZero(0.0));
  }
}

TEST(So3, VeeRejectsNonSkew) {
  Mat3 m = hat(Vec3(1, 2, 3));
  m(0, 0) = 1e-6;
  try {
    vee(m);
    FAIL() << "expected NotSkew";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSkew);
  }
  m(0, 0) = 1e-11;
  EXPECT_NO_THROW(vee(m));
}

TEST(So3, PsiKnownValues) {
  EXPECT_DOUBLE_EQ(attitude_error_psi(Mat3::Identity(), Mat3::Identity()), 0.0);
  EXPECT_NEAR(attitude_error_psi(rotation_about(kE3, kPi), Mat3::Identity()), 2.0, 1e-15);
  EXPECT_NEAR(attitude_error_psi(rotation_about(kE1, kPi / 2), Mat3::Identity()), 1.0, 1e-15);
}

TEST(So3, RotationErrorQuarterTurn) {
  EXPECT_TRUE(rotation_error(Mat3::Identity(), Mat3::Identity()).isZero(0.0));
  const Vec3 e = rotation_error(rotation_about(kE3, kPi / 2), Mat3::Identity());
  EXPECT_LE((e - kE3).norm(), 1e-15);
}

TEST(So3, RotationErrorAntisymmetricAndBounded) {
  std::mt19937 rng(2);
  for (int i = 0; i < 500; ++i) {
    const Mat3 r = random_rotation(rng), rd = random_rotation(rng);
    const Vec3 a = rotation_error(r, rd), b = rotation_error(rd, r);
    EXPECT_LE((a + b).norm(), 1e-14);
    EXPECT_LE(a.norm(), 1.0 + 1e-12);
    const double psi = attitude_error_psi(r, rd);
    EXPECT_GE(psi, -1e-15);
    EXPECT_LE(psi, 2.0 + 1e-15);
    EXPECT_LE(0.5 * a.squaredNorm(), psi + 1e-12);
  }
}

TEST(So3, AngularVelocityError) {
  const Vec3 w(0.3, -0.2, 0.1);
  EXPECT_TRUE(angular_velocity_error(w, Mat3::Identity(), Mat3::Identity(), w).isZero(0.0));
  const Mat3 r = rotation_about(Vec3(1, 1, 0), 0.4);
  EXPECT_EQ(angular_velocity_error(w, r, Mat3::Identity(), Vec3::Zero()), w);
  const Vec3 e = angular_velocity_error(w, rotation_about(kE3, kPi), Mat3::Identity(), kE1);
  EXPECT_LE((e - (w - Vec3(-1, 0, 0))).norm(), 1e-15);
}

TEST(So3, OrthonormalizeFixedPoint) {
  std::mt19937 rng(3);
  const Mat3 r = random_rotation(rng);
  EXPECT_LE((orthonormalize(r) - r).norm(), 1e-12);
}

TEST(So3, OrthonormalizeSmallPerturbation) {
  const Mat3 m = Mat3::Identity() + 1e-5 * hat(Vec3(1, 1, 1));
  const Mat3 r = orthonormalize(m);
  EXPECT_TRUE(is_rotation(r));
  EXPECT_LE((r - m).norm(), 1e-5);
  // The polar factor of I + S is (I + S)(I - S^2)^(-1/2).
  const Mat3 s = 1e-5 * hat(Vec3(1, 1, 1));
  const Eigen::SelfAdjointEigenSolver<Mat3> es(Mat3::Identity() - s * s);
  const Mat3 expected = m * es.operatorInverseSqrt();
  EXPECT_LE((r - expected).norm(), 1e-14);
}

TEST(So3, OrthonormalizeRemovesScale) {
  const Mat3 r = rotation_about(Vec3(0.2, -1, 0.5), 1.1);
  EXPECT_LE((orthonormalize(1.0001 * r) - r).norm(), 1e-12);
}

TEST(So3, OrthonormalizeIdempotent) {
  const Mat3 m = rotation_about(Vec3(1, 2, 3), 0.7) + 1e-4 * Mat3::Ones();
  const Mat3 once = orthonormalize(m);
  EXPECT_LE((orthonormalize(once) - once).norm(), 1e-14);
}

TEST(So3, OrthonormalizeRejectsDegenerate) {
  Mat3 m = Mat3::Identity();
  m(2, 2) = 1e-8;
  try {
    orthonormalize(m);
    FAIL() << "expected Degenerate";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Degenerate);
  }
}

TEST(So3, ExpMapIsRotation) {
  std::mt19937 rng(4);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(is_rotation(exp_map(Vec3(n(rng), n(rng), n(rng))), 1e-12));
  EXPECT_TRUE(is_rotation(exp_map(Vec3(1e-10, 0, 0))));
}

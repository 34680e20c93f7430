#include "clarke/errors.hpp"
#include "clarke/kinematics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace clarke;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kD = 0.01;
constexpr double kL = 0.1;

SegmentGeometry geometry(int n) { return SegmentGeometry(JointLayout(n, kD), kL); }

// Tip frame and position written out from Rz(theta) Ry(phi) and the arc
// geometry, independent of the library's implementation.
Pose reference_pose(double kappa, double theta) {
  const double phi = kappa * kL;
  Eigen::Matrix3d rz;
  rz << std::cos(theta), -std::sin(theta), 0, std::sin(theta), std::cos(theta), 0, 0, 0, 1;
  Eigen::Matrix3d ry;
  ry << std::cos(phi), 0, std::sin(phi), 0, 1, 0, -std::sin(phi), 0, std::cos(phi);
  Pose p;
  p.rotation = rz * ry;
  const double radius = 1.0 / kappa;
  p.position = Position(radius * (1 - std::cos(phi)) * std::cos(theta),
                        radius * (1 - std::cos(phi)) * std::sin(theta), radius * std::sin(phi));
  return p;
}

Eigen::VectorXd manifold_sample(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double a = 2.0 * kPi * u(rng);
  Eigen::VectorXd rho(n);
  for (int i = 0; i < n; ++i) {
    rho(i) = r * std::cos(2.0 * kPi * i / n - a);
  }
  return rho;
}

TEST(JointArcMap, ArcToJointExamples) {
  const SegmentGeometry g = geometry(3);
  EXPECT_TRUE(arc_to_joint(g, CurvatureCurvature{0.0, 0.0}).isZero(0.0));
  const Displacement rho = arc_to_joint(g, CurvatureCurvature{10.0, 0.0});
  EXPECT_NEAR(rho(0), 0.01, 1e-15);
  EXPECT_NEAR(rho(1), -0.005, 1e-15);
  EXPECT_NEAR(rho(2), -0.005, 1e-15);
}

TEST(JointArcMap, ArcToJointMatchesPerJointCosine) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> k(0.0, 31.0);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (const int n : {3, 4, 5, 8, 13}) {
    const SegmentGeometry g = geometry(n);
    for (int s = 0; s < 200; ++s) {
      const CurvatureAngle ca{k(rng), a(rng)};
      const Displacement rho = arc_to_joint(g, ca);
      const Displacement via_cc = arc_to_joint(g, car_to_ccr(ca));
      EXPECT_TRUE(rho.cwiseEqual(via_cc).all());
      for (int i = 0; i < n; ++i) {
        EXPECT_NEAR(rho(i), kD * kL * ca.kappa * std::cos(2.0 * kPi * i / n - ca.theta), 1e-12);
      }
    }
  }
}

TEST(JointArcMap, JointToArcInvertsAndProjects) {
  const SegmentGeometry g = geometry(3);
  const CurvatureCurvature cc = joint_to_arc(g, Eigen::Vector3d(0.01, -0.005, -0.005));
  EXPECT_NEAR(cc.kappa_x, 10.0, 1e-12);
  EXPECT_NEAR(cc.kappa_y, 0.0, 1e-12);
  EXPECT_EQ(joint_to_arc(g, Eigen::Vector3d::Zero()).kappa_x, 0.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  std::uniform_real_distribution<double> w(-0.01, 0.01);
  for (const int n : {3, 4, 6}) {
    const SegmentGeometry gn = geometry(n);
    const Eigen::MatrixXd p = gn.transform().projector();
    for (int s = 0; s < 10000; ++s) {
      const CurvatureCurvature arc{u(rng), u(rng)};
      const CurvatureCurvature back = joint_to_arc(gn, arc_to_joint(gn, arc));
      ASSERT_NEAR(back.kappa_x, arc.kappa_x, 1e-12);
      ASSERT_NEAR(back.kappa_y, arc.kappa_y, 1e-12);
    }
    Eigen::VectorXd off(n);
    for (int i = 0; i < n; ++i) {
      off(i) = w(rng);
    }
    const CurvatureCurvature a = joint_to_arc(gn, off);
    const CurvatureCurvature b = joint_to_arc(gn, p * off);
    EXPECT_NEAR(a.kappa_x, b.kappa_x, 1e-12);
    EXPECT_NEAR(a.kappa_y, b.kappa_y, 1e-12);
  }
}

TEST(JointArcMap, CurvatureAngleExtraction) {
  const SegmentGeometry g = geometry(5);
  CurvatureAngle ca = joint_to_curvature_angle(g, Eigen::VectorXd::Zero(5));
  EXPECT_EQ(ca.kappa, 0.0);
  EXPECT_EQ(ca.theta, 0.0);

  const double kappa0 = 12.5;
  const Eigen::VectorXd rho = kD * kL * kappa0 * g.transform().inverse().col(0);
  ca = joint_to_curvature_angle(g, rho);
  EXPECT_NEAR(ca.kappa, kappa0, 1e-12);
  EXPECT_NEAR(ca.theta, 0.0, 1e-12);

  // Two routes to kappa: via |M rho| and via the 2/n scaling of |rho|.
  std::mt19937_64 rng(3);
  for (int s = 0; s < 500; ++s) {
    const Eigen::VectorXd r = manifold_sample(rng, 5, kD * kPi);
    const CurvatureAngle c = joint_to_curvature_angle(g, r);
    const double via_forward = (g.transform().forward() * r).norm() / (kD * kL);
    EXPECT_NEAR(c.kappa, via_forward, 1e-12);
    const CurvatureCurvature cc = joint_to_arc(g, r);
    EXPECT_NEAR(c.kappa * std::cos(c.theta), cc.kappa_x, 1e-12);
    EXPECT_NEAR(c.kappa * std::sin(c.theta), cc.kappa_y, 1e-12);
  }

  Eigen::VectorXd off = Eigen::VectorXd::Zero(5);
  off(0) = 1e-3;
  try {
    joint_to_curvature_angle(g, off);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(TipPose, StraightAndAnalyticPoses) {
  const SegmentGeometry g = geometry(3);
  Pose p = arc_to_pose(g, {0.0, 1.3});
  EXPECT_TRUE(p.rotation.isIdentity(0.0));
  EXPECT_EQ(p.position, Position(0.0, 0.0, kL));

  p = arc_to_pose(g, {kPi / kL, 0.0});
  EXPECT_NEAR(p.position.x(), 0.063662, 1e-6);
  EXPECT_NEAR(p.position.x(), 2.0 * kL / kPi, 1e-12);
  EXPECT_NEAR(p.position.y(), 0.0, 1e-12);
  EXPECT_NEAR(p.position.z(), 0.0, 1e-12);

  p = arc_to_pose(g, {kPi / (2.0 * kL), 0.0});
  EXPECT_NEAR(p.position.x(), 2.0 * kL / kPi, 1e-12);
  EXPECT_NEAR(p.position.z(), 2.0 * kL / kPi, 1e-12);
  EXPECT_THROW(arc_to_pose(g, {-1.0, 0.0}), DomainError);
}

TEST(TipPose, MatchesReferenceFrameAndIsOrthonormal) {
  const SegmentGeometry g = geometry(4);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> k(1e-3, 31.0);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  for (int s = 0; s < 1000; ++s) {
    const double kappa = k(rng);
    const double theta = a(rng);
    const Pose p = arc_to_pose(g, {kappa, theta});
    const Pose ref = reference_pose(kappa, theta);
    EXPECT_LE((p.rotation - ref.rotation).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((p.position - ref.position).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(is_rotation(p.rotation, 1e-12));
  }
}

TEST(TipPose, TruncatedSeriesAgreeNearStraight) {
  // Series of sin(kl)/k and (1 - cos(kl))/k for |kl| < 1e-3.
  const SegmentGeometry g = geometry(3);
  for (const double kl : {1e-9, 1e-6, 1e-4, 9e-4}) {
    const double k = kl / kL;
    const Pose p = arc_to_pose(g, {k, 0.0});
    const double z = kL - std::pow(kL, 3) * k * k / 6.0 + std::pow(kL, 5) * std::pow(k, 4) / 120.0;
    const double x = kL * kL * k / 2.0 - std::pow(kL, 4) * std::pow(k, 3) / 24.0;
    EXPECT_NEAR(p.position.z(), z, 1e-12);
    EXPECT_NEAR(p.position.x(), x, 1e-12);
  }
}

TEST(InverseTaskMap, PositionExamples) {
  const SegmentGeometry g = geometry(3);
  CurvatureCurvature cc = arc_from_position(g, Position(0.0, 0.0, kL));
  EXPECT_EQ(cc.kappa_x, 0.0);
  EXPECT_EQ(cc.kappa_y, 0.0);
  const double c = 2.0 * kL / kPi;
  cc = arc_from_position(g, Position(c, 0.0, c));
  EXPECT_NEAR(cc.kappa_x, kPi / (2.0 * kL), 1e-12);
  EXPECT_NEAR(cc.kappa_y, 0.0, 1e-12);

  EXPECT_THROW(arc_from_position(g, Position(c, 0.0, 0.0)), DomainError);
  EXPECT_THROW(arc_from_position(g, Position(0.0, 0.0, 0.0)), DomainError);
  EXPECT_THROW(arc_from_position(g, Position(0.01, 0.0, -0.05)), DomainError);
  try {
    arc_from_position(g, Position(0.01, 0.0, 0.0));
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("p_z"), std::string::npos);
  }

  // kappa from the position formula equals the norm of its components.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 500; ++s) {
    const Pose p = arc_to_pose(g, {0.99 * kPi / kL * u(rng), 2.0 * kPi * u(rng)});
    const CurvatureCurvature k = arc_from_position(g, p.position);
    const double kappa = 2.0 * std::hypot(p.position.x(), p.position.y()) / p.position.squaredNorm();
    EXPECT_NEAR(std::hypot(k.kappa_x, k.kappa_y), kappa, 1e-12);
  }
}

TEST(InverseTaskMap, RotationExample) {
  const SegmentGeometry g = geometry(3);
  const Pose p = arc_to_pose(g, {5.0, kPi / 3.0});
  const CurvatureCurvature cc = arc_from_rotation(g, p.rotation);
  EXPECT_NEAR(cc.kappa_x, 2.5, 1e-12);
  EXPECT_NEAR(cc.kappa_y, 4.330127018922193, 1e-12);
  const CurvatureCurvature from_pose = arc_from_pose(g, p);
  EXPECT_NEAR(from_pose.kappa_x, 2.5, 1e-12);
  EXPECT_NEAR(from_pose.kappa_y, 4.330127018922193, 1e-12);

  Rotation bad = Rotation::Identity();
  bad(0, 0) = 2.0;
  EXPECT_THROW(arc_from_rotation(g, bad), DomainError);
}

TEST(InverseTaskMap, RecoveredCurvatureMatchesAllQuadrants) {
  const SegmentGeometry g = geometry(5);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 2000; ++s) {
    const CurvatureAngle ca{0.99 * kPi / kL * u(rng), 2.0 * kPi * u(rng)};
    const CurvatureCurvature expected = car_to_ccr(ca);
    const Pose p = arc_to_pose(g, ca);
    for (const CurvatureCurvature got :
         {arc_from_position(g, p.position), arc_from_rotation(g, p.rotation), arc_from_pose(g, p)}) {
      ASSERT_NEAR(got.kappa_x, expected.kappa_x, 1e-9);
      ASSERT_NEAR(got.kappa_y, expected.kappa_y, 1e-9);
    }
  }
}

TEST(PoseFromPosition, Examples) {
  const SegmentGeometry g = geometry(3);
  Pose p = pose_from_position(g, Position(0.0, 0.0, kL));
  EXPECT_TRUE(p.rotation.isIdentity(0.0));
  const Pose quarter = arc_to_pose(g, {kPi / (2.0 * kL), 0.0});
  p = pose_from_position(g, quarter.position);
  EXPECT_LE((p.rotation - quarter.rotation).cwiseAbs().maxCoeff(), 1e-9);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 1000; ++s) {
    const Pose truth = arc_to_pose(g, {0.99 * kPi / kL * u(rng), 2.0 * kPi * u(rng)});
    const Pose rec = pose_from_position(g, truth.position);
    EXPECT_TRUE(is_rotation(rec.rotation, 1e-9));
    EXPECT_LE((rec.rotation - truth.rotation).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_THROW(pose_from_position(g, Position(0.05, 0.0, 0.0)), DomainError);
}

TEST(ForwardKinematics, StraightAndHalfCircle) {
  for (const int n : {3, 4, 7}) {
    const SegmentGeometry g = geometry(n);
    const Pose p = forward_kinematics(g, Eigen::VectorXd::Zero(n));
    EXPECT_LE((p.position - Position(0, 0, kL)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((p.rotation - Rotation::Identity()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_TRUE(p.position.allFinite());

    const Displacement half = g.transform().inverse_transform({kD * kPi, 0.0});
    const Pose h = forward_kinematics(g, half);
    EXPECT_NEAR(h.position.x(), 2.0 * kL / kPi, 1e-9);
    EXPECT_NEAR(h.position.y(), 0.0, 1e-9);
    EXPECT_NEAR(h.position.z(), 0.0, 1e-9);
  }
  EXPECT_THROW(forward_kinematics(geometry(3), Eigen::VectorXd::Zero(4)), DimensionError);
}

TEST(ForwardKinematics, AgreesWithArcComposition) {
  std::mt19937_64 rng(8);
  for (const int n : {3, 4, 5, 8}) {
    const SegmentGeometry g = geometry(n);
    for (int s = 0; s < 2000; ++s) {
      const Eigen::VectorXd rho = manifold_sample(rng, n, kD * kPi);
      if (rho.norm() <= 1e-3) {
        continue;
      }
      const Pose direct = forward_kinematics(g, rho);
      const Pose composed = arc_to_pose(g, joint_to_curvature_angle(g, rho));
      ASSERT_LT((direct.position - composed.position).norm(), 1e-9);
      ASSERT_LT((direct.rotation - composed.rotation).norm(), 1e-9);
    }
  }
}

TEST(ForwardKinematics, SmallDisplacementsStayAccurate) {
  const SegmentGeometry g = geometry(5);
  for (const double r : {1e-4, 1e-6, 1e-8}) {
    for (int k = 0; k < 16; ++k) {
      const double a = 2.0 * kPi * k / 16.0;
      const Displacement rho = g.transform().inverse_transform({r * std::cos(a), r * std::sin(a)});
      const Pose direct = forward_kinematics(g, rho);
      const Pose composed = arc_to_pose(g, joint_to_curvature_angle(g, rho));
      // Direction error decays with the square of epsilon / |rho|.
      const double eps = std::sqrt(2.0 / 5.0) * Regularization{}.epsilon;
      const double tol = 1e-9 + 10.0 * std::pow(eps / (g.transform().forward() * rho).norm(), 2);
      EXPECT_TRUE(is_rotation(direct.rotation, tol)) << r;
      EXPECT_LT((direct.rotation - composed.rotation).norm(), tol) << r;
      EXPECT_LT((direct.position - composed.position).norm(), 1e-9) << r;
    }
  }
}

TEST(InverseKinematics, Examples) {
  const SegmentGeometry g = geometry(4);
  EXPECT_LE(ik_position(g, Position(0, 0, kL)).cwiseAbs().maxCoeff(), 0.0);
  const Pose quarter = arc_to_pose(g, {kPi / (2.0 * kL), 0.0});
  const Displacement expected = arc_to_joint(g, CurvatureAngle{kPi / (2.0 * kL), 0.0});
  EXPECT_LE((ik_position(g, quarter.position) - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((ik_pose(g, quarter) - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((ik_rotation(g, quarter.rotation) - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(ik_position(g, Position(0.05, 0.0, -1e-3)), DomainError);
  EXPECT_THROW(ik_pose(g, Pose{Rotation::Identity(), Position(0.0, 0.0, 0.0)}), DomainError);
}

TEST(InverseKinematics, RoundTripsThroughForwardKinematics) {
  std::mt19937_64 rng(9);
  for (const int n : {3, 4, 5, 8}) {
    const SegmentGeometry g = geometry(n);
    for (int s = 0; s < 2500; ++s) {
      const Eigen::VectorXd rho = manifold_sample(rng, n, kD * kPi);
      const Pose target = forward_kinematics(g, rho);
      const Displacement a = ik_position(g, target.position);
      const Displacement b = ik_pose(g, target);
      ASSERT_TRUE(is_on_manifold(g.transform(), a, 1e-12));
      ASSERT_LT((forward_kinematics(g, a).position - target.position).norm(), 1e-9);
      ASSERT_LT((forward_kinematics(g, b).rotation - target.rotation).norm(), 1e-9);
    }
  }
}

TEST(InverseKinematics, OrientationFixesOnlyBendingAngle) {
  const SegmentGeometry short_seg(JointLayout(3, kD), 0.05);
  const SegmentGeometry long_seg(JointLayout(3, kD), 0.2);
  const Rotation r = arc_to_pose(short_seg, {20.0, 0.7}).rotation;
  // The displacement depends on d * phi only, so it is the same for any l...
  const Displacement a = ik_rotation(short_seg, r);
  const Displacement b = ik_rotation(long_seg, r);
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-15);
  // ...while the implied curvature scales inversely with l.
  const CurvatureCurvature ka = arc_from_rotation(short_seg, r);
  const CurvatureCurvature kb = arc_from_rotation(long_seg, r);
  EXPECT_NEAR(ka.kappa_x / kb.kappa_x, 0.2 / 0.05, 1e-12);
  EXPECT_NEAR(ka.kappa_y / kb.kappa_y, 0.2 / 0.05, 1e-12);
  // Bending plane and kappa l are reproduced.
  const Pose back = forward_kinematics(short_seg, a);
  EXPECT_LT((back.rotation - r).norm(), 1e-9);
}

TEST(IsRotation, DetectsImproperMatrices) {
  EXPECT_TRUE(is_rotation(Rotation::Identity()));
  Rotation reflect = Rotation::Identity();
  reflect(2, 2) = -1.0;
  EXPECT_FALSE(is_rotation(reflect));
  EXPECT_FALSE(is_rotation(2.0 * Rotation::Identity()));
}

}  // namespace

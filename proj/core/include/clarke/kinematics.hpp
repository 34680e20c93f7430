#pragma once

// Closed-form constant-curvature kinematics of a single segment.
//
// Spaces: joint displacements rho (R^n, feasible set Q) <-> arc parameters
// <-> tip pose. The robot-dependent map between joint and arc space is linear
// in Cartesian curvature:
//   rho = d l M_inv [kx; ky]          [kx; ky] = M rho / (d l)
// The robot-independent map to the tip uses the frame
//   R = Rz(theta) Ry(kappa l),
//   p = ((1 - cos kl) cos theta / k, (1 - cos kl) sin theta / k, sin kl / k).

#include "clarke/arc_space.hpp"

#include <Eigen/Dense>

namespace clarke {

using Position = Eigen::Vector3d;
using Rotation = Eigen::Matrix3d;

struct Pose {
  Rotation rotation = Rotation::Identity();
  Position position = Position::Zero();
};

/// epsilon (meters) is added to the displacement norm so the direct forward
/// kinematics never divides by zero. The bending angle error is linear in
/// epsilon; the bending direction error is of order (epsilon / |rho|)^2.
struct Regularization {
  double epsilon = 1e-12;
};

/// Tip positions with p_z at or below this height (meters) are rejected by the
/// position and pose inverse maps.
inline constexpr double kMinTipHeight = 1e-9;

/// Default tolerance on ||P rho - rho||_inf for curvature-angle extraction.
inline constexpr double kManifoldTolerance = 1e-9;

// -- joint space <-> arc space ------------------------------------------------

Displacement arc_to_joint(const SegmentGeometry& geom, const CurvatureCurvature& arc);
Displacement arc_to_joint(const SegmentGeometry& geom, const CurvatureAngle& arc);

/// Linear; any off-manifold component of rho is projected away.
CurvatureCurvature joint_to_arc(const SegmentGeometry& geom,
                                const Eigen::Ref<const Eigen::VectorXd>& rho);

/// kappa = sqrt(2n)/(d l n) ||rho||, theta = atan2 of the Clarke coordinates.
/// Throws DomainError if rho is further than manifold_tol from Q.
CurvatureAngle joint_to_curvature_angle(const SegmentGeometry& geom,
                                        const Eigen::Ref<const Eigen::VectorXd>& rho,
                                        double manifold_tol = kManifoldTolerance);

// -- arc space <-> task space -------------------------------------------------

/// Straight segment (kappa == 0) maps to p = (0, 0, l), R = I.
Pose arc_to_pose(const SegmentGeometry& geom, const CurvatureAngle& arc);

CurvatureCurvature arc_from_position(const SegmentGeometry& geom, const Position& p);
CurvatureCurvature arc_from_rotation(const SegmentGeometry& geom, const Rotation& r);
CurvatureCurvature arc_from_pose(const SegmentGeometry& geom, const Pose& pose);

/// Reconstructs the full tip frame from the tip position alone.
Pose pose_from_position(const SegmentGeometry& geom, const Position& p);

// -- kinematics -----------------------------------------------------------------

/// Forward kinematics straight from joint space, without evaluating arc
/// parameters and without branching on the curvature.
Pose forward_kinematics(const SegmentGeometry& geom, const Eigen::Ref<const Eigen::VectorXd>& rho,
                        Regularization reg = {});

/// rho = 2 d l / |p|^2 M_inv [px; py]
Displacement ik_position(const SegmentGeometry& geom, const Position& p);

/// Orientation alone fixes only kappa * l; the result does not depend on l.
Displacement ik_rotation(const SegmentGeometry& geom, const Rotation& r);

Displacement ik_pose(const SegmentGeometry& geom, const Pose& pose);

/// max |R^T R - I| <= tol and |det R - 1| <= tol
bool is_rotation(const Rotation& r, double tol = 1e-9);

}  // namespace clarke

#include "clarke/kinematics.hpp"

#include "clarke/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace clarke {

namespace {

// Rotation inputs to the inverse maps come from sensors or other solvers; they
// only need to be orthonormal at measurement precision.
constexpr double kRotationInputTolerance = 1e-6;

void require_size(const SegmentGeometry& geom, Eigen::Index size) {
  if (size != geom.n()) {
    throw DimensionError("displacement vector has " + std::to_string(size) +
                         " entries, segment has " + std::to_string(geom.n()) + " joints");
  }
}

void require_workspace(const Position& p) {
  if (!(p.z() > kMinTipHeight)) {
    std::ostringstream msg;
    msg << "tip position outside the permitted workspace: p_z must exceed " << kMinTipHeight
        << " m (p_z <= 0 and the origin are prohibited), got p = (" << p.x() << ", " << p.y()
        << ", " << p.z() << ")";
    throw DomainError(msg.str());
  }
}

void require_rotation(const Rotation& r) {
  if (!is_rotation(r, kRotationInputTolerance)) {
    throw DomainError("orientation is not a proper rotation matrix (R^T R != I or det R != 1)");
  }
}

// R = Rz(theta) Ry(phi) given the four trigonometric values.
Rotation frame(double cos_theta, double sin_theta, double cos_phi, double sin_phi) {
  Rotation r;
  r << cos_theta * cos_phi, -sin_theta, cos_theta * sin_phi,
       sin_theta * cos_phi,  cos_theta, sin_theta * sin_phi,
       -sin_phi,             0.0,       cos_phi;
  return r;
}

}  // namespace

Displacement arc_to_joint(const SegmentGeometry& geom, const CurvatureCurvature& arc) {
  const double dl = geom.d() * geom.length();
  return geom.transform().inverse() * Eigen::Vector2d(dl * arc.kappa_x, dl * arc.kappa_y);
}

Displacement arc_to_joint(const SegmentGeometry& geom, const CurvatureAngle& arc) {
  return arc_to_joint(geom, car_to_ccr(arc));
}

CurvatureCurvature joint_to_arc(const SegmentGeometry& geom,
                                const Eigen::Ref<const Eigen::VectorXd>& rho) {
  require_size(geom, rho.size());
  const Eigen::Vector2d xi = geom.transform().forward() * rho;
  const double dl = geom.d() * geom.length();
  return {xi.x() / dl, xi.y() / dl};
}

CurvatureAngle joint_to_curvature_angle(const SegmentGeometry& geom,
                                        const Eigen::Ref<const Eigen::VectorXd>& rho,
                                        double manifold_tol) {
  require_size(geom, rho.size());
  const double residual = manifold_residual(geom.transform(), rho);
  if (residual > manifold_tol) {
    std::ostringstream msg;
    msg << "displacement vector is off the feasible manifold: projector residual " << residual
        << " exceeds " << manifold_tol;
    throw DomainError(msg.str());
  }
  const double n = geom.n();
  const double kappa =
      std::sqrt(2.0 * n) / (geom.d() * geom.length() * n) * std::sqrt(rho.squaredNorm());
  if (kappa == 0.0) {
    return {0.0, 0.0};
  }
  const Eigen::Vector2d xi = geom.transform().forward() * rho;
  return {kappa, std::atan2(xi.y(), xi.x())};
}

Pose arc_to_pose(const SegmentGeometry& geom, const CurvatureAngle& arc) {
  if (!(arc.kappa >= 0.0)) {
    throw DomainError("curvature must be non-negative");
  }
  const double l = geom.length();
  if (arc.kappa == 0.0) {
    return {Rotation::Identity(), Position(0.0, 0.0, l)};
  }
  const double phi = arc.kappa * l;
  const double ct = std::cos(arc.theta);
  const double st = std::sin(arc.theta);
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  const double half = std::sin(0.5 * phi);
  const double versine = 2.0 * half * half;  // 1 - cos(phi) without cancellation
  Pose pose;
  pose.rotation = frame(ct, st, cp, sp);
  pose.position = Position(ct * versine / arc.kappa, st * versine / arc.kappa, sp / arc.kappa);
  return pose;
}

CurvatureCurvature arc_from_position(const SegmentGeometry&, const Position& p) {
  require_workspace(p);
  const double sq = p.squaredNorm();
  return {2.0 * p.x() / sq, 2.0 * p.y() / sq};
}

CurvatureCurvature arc_from_rotation(const SegmentGeometry& geom, const Rotation& r) {
  require_rotation(r);
  const double phi = std::atan2(-r(2, 0), r(2, 2));
  const double scale = phi / geom.length();
  return {r(1, 1) * scale, -r(0, 1) * scale};
}

CurvatureCurvature arc_from_pose(const SegmentGeometry&, const Pose& pose) {
  require_workspace(pose.position);
  require_rotation(pose.rotation);
  const Rotation& r = pose.rotation;
  const double kappa = -r(2, 0) / pose.position.z();
  return {kappa * r(1, 1), -kappa * r(0, 1)};
}

Pose pose_from_position(const SegmentGeometry&, const Position& p) {
  require_workspace(p);
  const double radial = std::hypot(p.x(), p.y());
  if (radial == 0.0) {
    return {Rotation::Identity(), p};
  }
  const double sq = p.squaredNorm();
  const double ct = p.x() / radial;
  const double st = p.y() / radial;
  const double sp = 2.0 * p.z() * radial / sq;
  const double cp = (p.z() * p.z() - radial * radial) / sq;
  return {frame(ct, st, cp, sp), p};
}

Pose forward_kinematics(const SegmentGeometry& geom, const Eigen::Ref<const Eigen::VectorXd>& rho,
                        Regularization reg) {
  require_size(geom, rho.size());
  const double n = geom.n();
  const double d = geom.d();
  const double l = geom.length();

  // Work with the Clarke coordinates: on Q, |xi| = sqrt(2/n) |rho|, so adding
  // epsilon to |rho| adds sqrt(2/n) epsilon to |xi|.
  const Eigen::Vector2d xi = geom.transform().forward() * rho;
  const double eps = std::sqrt(2.0 / n) * reg.epsilon;
  const double magnitude = xi.norm();
  const double norm = magnitude + eps;

  // The bending direction gets an offset along +x that is eps at the origin
  // (so the straight pose is the identity frame) and fades like eps^2 / |xi|,
  // which keeps the direction error second order in eps.
  const double offset = eps * (eps / norm);
  const double direction_norm = magnitude + offset;
  const double ct = (xi.x() + offset) / direction_norm;
  const double st = xi.y() / direction_norm;

  const double phi = norm / d;           // kappa l
  const double inv_kappa = l / phi;       // 1 / kappa
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  const double half = std::sin(0.5 * phi);
  const double versine = 2.0 * half * half;

  Pose pose;
  pose.rotation = frame(ct, st, cp, sp);
  pose.position = Position(ct * versine * inv_kappa, st * versine * inv_kappa, sp * inv_kappa);
  return pose;
}

Displacement ik_position(const SegmentGeometry& geom, const Position& p) {
  require_workspace(p);
  const double scale = 2.0 * geom.d() * geom.length() / p.squaredNorm();
  return geom.transform().inverse() * Eigen::Vector2d(scale * p.x(), scale * p.y());
}

Displacement ik_rotation(const SegmentGeometry& geom, const Rotation& r) {
  require_rotation(r);
  const double scale = geom.d() * std::atan2(-r(2, 0), r(2, 2));
  return geom.transform().inverse() * Eigen::Vector2d(scale * r(1, 1), -scale * r(0, 1));
}

Displacement ik_pose(const SegmentGeometry& geom, const Pose& pose) {
  require_workspace(pose.position);
  require_rotation(pose.rotation);
  const Rotation& r = pose.rotation;
  const double scale = -geom.d() * geom.length() * r(2, 0) / pose.position.z();
  return geom.transform().inverse() * Eigen::Vector2d(scale * r(1, 1), -scale * r(0, 1));
}

bool is_rotation(const Rotation& r, double tol) {
  const double ortho = (r.transpose() * r - Rotation::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace clarke

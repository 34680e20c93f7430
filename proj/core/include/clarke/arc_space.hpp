#pragma once

// Arc-space representations of a single constant-curvature segment and their
// relation to Clarke coordinates.
//
// Under constant curvature the Clarke coordinates are the projections of the
// virtual displacement d * l * kappa onto the base xz and yz planes:
//   (re, im) = d * l * (kappa cos(theta), kappa sin(theta)) = d * l * (kx, ky)

#include "clarke/clarke_core.hpp"

namespace clarke {

/// kappa >= 0 in 1/m, bending-plane angle theta in radians.
struct CurvatureAngle {
  double kappa = 0.0;
  double theta = 0.0;
};

/// Cartesian curvature components in 1/m, any sign.
struct CurvatureCurvature {
  double kappa_x = 0.0;
  double kappa_y = 0.0;
};

/// Bending angle phi = kappa * l >= 0 and bending-plane angle theta.
struct AngleAngle {
  double phi = 0.0;
  double theta = 0.0;
};

/// Joint layout plus segment length l > 0, with the Clarke matrices cached.
class SegmentGeometry {
public:
  SegmentGeometry(JointLayout layout, double length);

  const JointLayout& layout() const noexcept { return layout_; }
  const ClarkeTransform& transform() const noexcept { return transform_; }
  int n() const noexcept { return layout_.n(); }
  double d() const noexcept { return layout_.d(); }
  double length() const noexcept { return length_; }

private:
  JointLayout layout_;
  double length_;
  ClarkeTransform transform_;
};

/// kappa = hypot(kx, ky), theta = atan2(ky, kx); straight segments get theta = 0.
CurvatureAngle ccr_to_car(const CurvatureCurvature& cc);

/// Throws DomainError for kappa < 0.
CurvatureCurvature car_to_ccr(const CurvatureAngle& ca);

AngleAngle car_to_aar(const CurvatureAngle& ca, double length);
CurvatureAngle aar_to_car(const AngleAngle& aa, double length);

/// (d l kappa cos theta, d l kappa sin theta). Throws DomainError for kappa < 0.
ClarkeCoordinates clarke_from_arc(const SegmentGeometry& geom, const CurvatureAngle& ca);

/// kappa = |xi| / (d l), theta = atan2(im, re); xi = 0 gives (0, 0).
CurvatureAngle arc_from_clarke(const SegmentGeometry& geom, const ClarkeCoordinates& xi);

struct VirtualDisplacement {
  double total = 0.0;   ///< d l kappa = d phi, lies in the bending plane
  double proj_x = 0.0;  ///< projection onto the base xz plane (= re)
  double proj_y = 0.0;  ///< projection onto the base yz plane (= im)
};

VirtualDisplacement virtual_displacement(const SegmentGeometry& geom, const CurvatureAngle& ca);

}  // namespace clarke

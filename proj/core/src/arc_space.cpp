#include "clarke/arc_space.hpp"

#include "clarke/errors.hpp"

#include <cmath>
#include <string>

namespace clarke {

namespace {

void require_non_negative_curvature(double kappa) {
  if (!(kappa >= 0.0)) {
    throw DomainError("curvature must be non-negative in the curvature-angle representation, got " +
                      std::to_string(kappa));
  }
}

}  // namespace

SegmentGeometry::SegmentGeometry(JointLayout layout, double length)
    : layout_(std::move(layout)), length_(length), transform_(layout_) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError("segment length must be positive and finite, got " + std::to_string(length));
  }
}

CurvatureAngle ccr_to_car(const CurvatureCurvature& cc) {
  if (cc.kappa_x == 0.0 && cc.kappa_y == 0.0) {
    return {0.0, 0.0};
  }
  return {std::hypot(cc.kappa_x, cc.kappa_y), std::atan2(cc.kappa_y, cc.kappa_x)};
}

CurvatureCurvature car_to_ccr(const CurvatureAngle& ca) {
  require_non_negative_curvature(ca.kappa);
  return {ca.kappa * std::cos(ca.theta), ca.kappa * std::sin(ca.theta)};
}

AngleAngle car_to_aar(const CurvatureAngle& ca, double length) {
  require_non_negative_curvature(ca.kappa);
  return {ca.kappa * length, ca.theta};
}

CurvatureAngle aar_to_car(const AngleAngle& aa, double length) {
  if (!(length > 0.0)) {
    throw DomainError("segment length must be positive");
  }
  if (!(aa.phi >= 0.0)) {
    throw DomainError("bending angle must be non-negative");
  }
  return {aa.phi / length, aa.theta};
}

ClarkeCoordinates clarke_from_arc(const SegmentGeometry& geom, const CurvatureAngle& ca) {
  require_non_negative_curvature(ca.kappa);
  const double virtual_total = geom.d() * geom.length() * ca.kappa;
  return {virtual_total * std::cos(ca.theta), virtual_total * std::sin(ca.theta)};
}

CurvatureAngle arc_from_clarke(const SegmentGeometry& geom, const ClarkeCoordinates& xi) {
  const Polar polar = rectangular_to_polar(xi);
  return {polar.amplitude / (geom.d() * geom.length()), polar.angle};
}

VirtualDisplacement virtual_displacement(const SegmentGeometry& geom, const CurvatureAngle& ca) {
  const ClarkeCoordinates xi = clarke_from_arc(geom, ca);
  return {geom.d() * geom.length() * ca.kappa, xi.re, xi.im};
}

}  // namespace clarke

#include "clarke/clarke_core.hpp"

#include "clarke/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace clarke {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

JointLayout::JointLayout(int n, double d) : n_(n), d_(d) {
  if (n < 3) {
    throw DomainError("joint layout needs n >= 3 actuators, got " + std::to_string(n));
  }
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw DomainError("joint radius d must be positive and finite, got " + std::to_string(d));
  }
  psi_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    psi_[static_cast<std::size_t>(i)] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
  }
}

double ClarkeCoordinates::norm() const { return std::hypot(re, im); }

Eigen::Vector2d unit_phasor(long k, long n) {
  // Reduce 2 pi k / n to a quadrant plus a residual angle in [0, pi/2) so that
  // multiples of a quarter turn come out exact.
  long m = ((k % n) + n) % n;
  const long scaled = 4 * m;
  const long quadrant = scaled / n;
  const long remainder = scaled % n;
  const double a = (std::numbers::pi / 2.0) * static_cast<double>(remainder) / static_cast<double>(n);
  const double c = std::cos(a);
  const double s = std::sin(a);
  // 0.0 - x rather than -x so that an exact zero stays +0.0.
  switch (quadrant) {
    case 0: return {c, s};
    case 1: return {0.0 - s, c};
    case 2: return {0.0 - c, 0.0 - s};
    default: return {s, 0.0 - c};
  }
}

ClarkeTransform::ClarkeTransform(int n) : n_(n) {
  if (n < 3) {
    throw DomainError("Clarke transform needs n >= 3 joints, got " + std::to_string(n));
  }
  forward_.resize(2, n);
  inverse_.resize(n, 2);
  const double scale = 2.0 / static_cast<double>(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d p = unit_phasor(i, n);
    inverse_(i, 0) = p.x();
    inverse_(i, 1) = p.y();
    forward_(0, i) = scale * p.x();
    forward_(1, i) = scale * p.y();
  }
}

ClarkeCoordinates ClarkeTransform::transform(const Eigen::Ref<const Eigen::VectorXd>& rho) const {
  if (rho.size() != n_) {
    throw DimensionError("displacement vector has " + std::to_string(rho.size()) +
                         " entries, transform expects " + std::to_string(n_));
  }
  return ClarkeCoordinates::from(forward_ * rho);
}

Displacement ClarkeTransform::inverse_transform(const ClarkeCoordinates& xi) const {
  return inverse_ * xi.vec();
}

Eigen::MatrixXd ClarkeTransform::projector() const { return inverse_ * forward_; }

double manifold_residual(const ClarkeTransform& t, const Eigen::Ref<const Eigen::VectorXd>& rho) {
  if (rho.size() != t.n()) {
    throw DimensionError("displacement vector has " + std::to_string(rho.size()) +
                         " entries, transform expects " + std::to_string(t.n()));
  }
  const Eigen::VectorXd projected = t.inverse() * (t.forward() * rho);
  return (projected - rho).lpNorm<Eigen::Infinity>();
}

bool is_on_manifold(const ClarkeTransform& t, const Eigen::Ref<const Eigen::VectorXd>& rho,
                    double tol) {
  if (!(tol > 0.0)) {
    throw DomainError("manifold tolerance must be positive");
  }
  if (std::abs(rho.sum()) > tol) {
    return false;
  }
  return manifold_residual(t, rho) <= tol;
}

Polar rectangular_to_polar(const ClarkeCoordinates& xi) {
  if (xi.re == 0.0 && xi.im == 0.0) {
    return {0.0, 0.0};
  }
  const double angle = std::atan2(xi.im, xi.re);
  // atan2(-0.0, x < 0) yields -pi; keep the half-open range (-pi, pi]
  return {std::hypot(xi.re, xi.im), angle == -std::numbers::pi ? std::numbers::pi : angle};
}

ClarkeCoordinates polar_to_rectangular(double amplitude, double angle) {
  if (amplitude < 0.0) {
    throw DomainError("polar amplitude must be non-negative");
  }
  return {amplitude * std::cos(angle), amplitude * std::sin(angle)};
}

Displacement displacement_from_rectangular(const JointLayout& layout, double re, double im) {
  Displacement rho(layout.n());
  for (int i = 0; i < layout.n(); ++i) {
    rho(i) = re * std::cos(layout.psi(i)) + im * std::sin(layout.psi(i));
  }
  return rho;
}

double wrap_to_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) {
    w += kTwoPi;
  }
  // fmod of a tiny negative value can round up to exactly 2 pi
  return w >= kTwoPi ? 0.0 : w;
}

double wrap_to_pi(double angle) {
  double w = wrap_to_two_pi(angle);
  return w > std::numbers::pi ? w - kTwoPi : w;
}

}  // namespace clarke

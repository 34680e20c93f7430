#pragma once

// Generalized Clarke transformation for n equally spaced displacement joints.
//
// The forward matrix M (2 x n) maps joint displacements rho to the two Clarke
// coordinates (re, im); its right-inverse M_inv (n x 2) maps them back onto the
// feasible 2-dof subspace Q of R^n:
//
//   M(0, j) = (2/n) cos(psi_j),   M(1, j) = (2/n) sin(psi_j)
//   M_inv(i, :) = [cos(psi_i), sin(psi_i)],   psi_i = 2 pi i / n  (0-based)
//
// M * M_inv = I2, M^T = (2/n) M_inv and P = M_inv * M is the orthogonal
// projector onto Q.

#include <Eigen/Dense>

#include <vector>

namespace clarke {

using Displacement = Eigen::VectorXd;
using ForwardMatrix = Eigen::Matrix<double, 2, Eigen::Dynamic>;
using InverseMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Actuator count n and joint radius d (meters). Joint i sits at angle
/// psi_i = 2 pi i / n for i = 0..n-1.
class JointLayout {
public:
  JointLayout(int n, double d);

  int n() const noexcept { return n_; }
  double d() const noexcept { return d_; }
  double psi(int i) const { return psi_.at(static_cast<std::size_t>(i)); }
  const std::vector<double>& angles() const noexcept { return psi_; }

private:
  int n_;
  double d_;
  std::vector<double> psi_;
};

struct ClarkeCoordinates {
  double re = 0.0;  ///< meters
  double im = 0.0;  ///< meters

  Eigen::Vector2d vec() const { return {re, im}; }
  static ClarkeCoordinates from(const Eigen::Vector2d& v) { return {v.x(), v.y()}; }
  double norm() const;
};

/// cos and sin of 2 pi k / n. Quarter turns are exact (cos(pi/2) == 0).
Eigen::Vector2d unit_phasor(long k, long n);

class ClarkeTransform {
public:
  /// Throws DomainError for n < 3.
  explicit ClarkeTransform(int n);
  explicit ClarkeTransform(const JointLayout& layout) : ClarkeTransform(layout.n()) {}

  int n() const noexcept { return n_; }
  const ForwardMatrix& forward() const noexcept { return forward_; }
  const InverseMatrix& inverse() const noexcept { return inverse_; }

  /// M * rho. Throws DimensionError if rho.size() != n.
  ClarkeCoordinates transform(const Eigen::Ref<const Eigen::VectorXd>& rho) const;

  /// M_inv * xi. The result always sums to zero (up to rounding).
  Displacement inverse_transform(const ClarkeCoordinates& xi) const;

  /// Symmetric circulant projector P = M_inv * M, entries (2/n) cos(2 pi (i-j)/n).
  Eigen::MatrixXd projector() const;

private:
  int n_;
  ForwardMatrix forward_;
  InverseMatrix inverse_;
};

/// True iff |sum(rho)| <= tol and ||P rho - rho||_inf <= tol. For n >= 4 the
/// scalar sum alone does not characterize Q. Throws DomainError for tol <= 0.
bool is_on_manifold(const ClarkeTransform& t, const Eigen::Ref<const Eigen::VectorXd>& rho,
                    double tol);

/// ||P rho - rho||_inf
double manifold_residual(const ClarkeTransform& t, const Eigen::Ref<const Eigen::VectorXd>& rho);

struct Polar {
  double amplitude = 0.0;
  double angle = 0.0;  ///< radians in (-pi, pi]
};

/// (0, 0) maps to amplitude 0, angle 0.
Polar rectangular_to_polar(const ClarkeCoordinates& xi);

/// Throws DomainError for negative amplitude.
ClarkeCoordinates polar_to_rectangular(double amplitude, double angle);

/// rho_i = re cos(psi_i) + im sin(psi_i), evaluated per joint.
Displacement displacement_from_rectangular(const JointLayout& layout, double re, double im);

/// Wraps an angle into [0, 2 pi).
double wrap_to_two_pi(double angle);

/// Wraps an angle into (-pi, pi].
double wrap_to_pi(double angle);

}  // namespace clarke

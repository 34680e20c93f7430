#pragma once

// Closed-loop displacement control of one segment in Clarke space.
//
// The proportional law runs on the two Clarke coordinates and is wrapped by M
// and M_inv, so every command lies on Q whatever the measurement noise:
//
//   xi_m  = M rho_m
//   u     = M_inv (xi_d + kp (xi_d - xi_m))     with reference feedforward
//   u     = M_inv (kp (xi_d - xi_m))            pure proportional
//
// Each actuator is a first-order lag tau x' + x = u, discretized with an exact
// zero-order hold.

#include "clarke/arc_space.hpp"
#include "clarke/clarke_core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace clarke {

struct ControllerConfig {
  SegmentGeometry geometry;
  double kp = 125.0;
  double dt = 1e-3;             ///< seconds
  bool precompensation = true;  ///< false gives the pure proportional law

  /// Throws DomainError unless kp > 0 and dt > 0.
  void validate() const;
};

/// Joint command for one tick. Throws DimensionError on a size mismatch.
Displacement controller_step(const ControllerConfig& cfg, const ClarkeCoordinates& xi_desired,
                             const Eigen::Ref<const Eigen::VectorXd>& rho_measured);

class PT1Plant {
public:
  /// Zero initial state. Throws DomainError unless tau > 0 and n >= 1.
  PT1Plant(int n, double tau);
  PT1Plant(const Eigen::VectorXd& initial, double tau);

  double tau() const noexcept { return tau_; }
  const Eigen::VectorXd& state() const noexcept { return state_; }

  /// x <- a x + (1 - a) u with a = exp(-dt / tau).
  void step(const Eigen::Ref<const Eigen::VectorXd>& command, double dt);

private:
  double tau_;
  Eigen::VectorXd state_;
};

/// Measurement model: plant state plus uniform noise on [-epsilon, epsilon]
/// (one draw per joint and tick). A positive `resolution` rounds that reading
/// to the sensor grid, then the constant `bias` is added to every joint.
struct NoiseModel {
  double epsilon = 0.0;  ///< meters
  std::uint64_t seed = 0;
  double bias = 0.0;        ///< meters, added to every joint
  double resolution = 0.0;  ///< meters, 0 disables quantization

  /// Throws DomainError for negative epsilon or resolution.
  void validate() const;
};

struct TrajectorySpec {
  std::vector<ClarkeCoordinates> waypoints;
  double v_max = 0.01 * 3.141592653589793;  ///< m/s
  double a_max = 0.1 * 3.141592653589793;   ///< m/s^2
  double d_max = 0.1 * 3.141592653589793;   ///< m/s^2
  double hold = 0.0;                        ///< s, dwell appended at the goal

  /// Throws DomainError for fewer than two waypoints or non-positive limits.
  void validate() const;
};

/// Duration of a rest-to-rest trapezoidal move over `distance`.
double trapezoid_duration(double distance, double v_max, double a_max, double d_max);

/// Position along a rest-to-rest trapezoid at time t in [0, duration].
double trapezoid_position(double t, double distance, double v_max, double a_max, double d_max);

struct ClarkeTrajectory {
  std::vector<double> time;
  std::vector<ClarkeCoordinates> xi;
};

/// Synchronized trapezoid per segment: the coordinate with the larger
/// displacement follows the limits and the other is scaled along. Samples are
/// taken at k dt; every waypoint is visited at rest.
ClarkeTrajectory generate_clarke_trajectory(const TrajectorySpec& spec, double dt);

struct SimTrace {
  int n = 0;
  std::vector<double> time;
  Eigen::MatrixXd rho_desired;   ///< n x T
  Eigen::MatrixXd rho_measured;  ///< n x T
  Eigen::MatrixXd rho_command;   ///< n x T
  Eigen::MatrixXd rho_plant;     ///< n x T, state after the tick's plant update
};

/// Desired joint trajectory M_inv xi(t); only `time` and `rho_desired` are filled.
SimTrace generate_trajectory(const TrajectorySpec& spec, const SegmentGeometry& geometry, double dt);

enum class LoopMode { ClosedLoop, OpenLoop };

/// Per tick: measure (plant state + noise), compute the command, advance the
/// plant. OpenLoop sends rho_desired as the command and ignores the measurement.
SimTrace run_simulation(const ControllerConfig& cfg, PT1Plant plant, const NoiseModel& noise,
                        const ClarkeTrajectory& trajectory, LoopMode mode = LoopMode::ClosedLoop);

/// RMS over ticks of || xi_desired - M rho_plant ||.
double clarke_rms_error(const SimTrace& trace, const ClarkeTransform& transform);

/// Waypoints for the reference scenario: start at the straight configuration,
/// then `count - 1` points drawn with the annulus sampler in the Clarke disk of
/// radius max_radius (inner radius inner_radius).
std::vector<ClarkeCoordinates> sample_waypoints(const JointLayout& layout, std::size_t count,
                                                double inner_radius, double max_radius,
                                                std::uint64_t seed);

struct SimulationSummary {
  double rms_closed_loop = 0.0;
  double rms_open_loop = 0.0;
  double max_command_sum = 0.0;  ///< max |sum(u)| over all closed-loop commands
  std::size_t ticks = 0;
};

struct ComparisonRun {
  SimTrace closed_loop;
  SimTrace open_loop;
  SimulationSummary summary;
};

/// Runs the same trajectory and noise realization closed loop and open loop.
ComparisonRun compare_loops(const ControllerConfig& cfg, double tau, const NoiseModel& noise,
                            const ClarkeTrajectory& trajectory);

struct NoiseReport {
  int n = 0;
  int joint = 0;  ///< 0-based index of the disturbed joint
  double sigma = 0.0;
  Eigen::VectorXd spread;    ///< P (sigma e_joint)
  Eigen::VectorXd expected;  ///< (2 sigma / n) cos(psi_i - psi_joint)
  double peak = 0.0;         ///< largest |entry| of spread
  double squared_norm = 0.0;
  double ratio = 0.0;            ///< squared_norm / sigma^2, equals 2/n
  double unscaled_ratio = 0.0;   ///< n/2, the value obtained with an unscaled one-hot identity
  double idempotence_residual = 0.0;  ///< max |P spread - spread|
};

/// Throws DomainError for an invalid joint index or sigma <= 0.
NoiseReport noise_propagation(const JointLayout& layout, double sigma, int joint);

}  // namespace clarke

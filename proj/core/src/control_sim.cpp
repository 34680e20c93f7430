#include "clarke/control_sim.hpp"

#include "clarke/errors.hpp"
#include "clarke/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clarke {

namespace {

void require_size(Eigen::Index actual, int n, const char* what) {
  if (actual != n) {
    throw DimensionError(std::string(what) + " has length " + std::to_string(actual) +
                         ", expected " + std::to_string(n));
  }
}

}  // namespace

void ControllerConfig::validate() const {
  if (!(kp > 0.0)) {
    throw DomainError("controller gain kp must be positive");
  }
  if (!(dt > 0.0)) {
    throw DomainError("controller sample time dt must be positive");
  }
}

Displacement controller_step(const ControllerConfig& cfg, const ClarkeCoordinates& xi_desired,
                             const Eigen::Ref<const Eigen::VectorXd>& rho_measured) {
  const ClarkeTransform& t = cfg.geometry.transform();
  require_size(rho_measured.size(), t.n(), "measured displacement");
  // M annihilates a common offset, so subtracting the first joint changes
  // nothing mathematically and makes a constant bias cancel bit for bit.
  const Eigen::VectorXd shifted = rho_measured.array() - rho_measured(0);
  const Eigen::Vector2d xi_m = t.forward() * shifted;
  const Eigen::Vector2d xi_d = xi_desired.vec();
  Eigen::Vector2d u = cfg.kp * (xi_d - xi_m);
  if (cfg.precompensation) {
    u += xi_d;
  }
  return t.inverse() * u;
}

PT1Plant::PT1Plant(int n, double tau) : PT1Plant(Eigen::VectorXd::Zero(std::max(n, 0)), tau) {
  if (n < 1) {
    throw DomainError("plant needs at least one joint");
  }
}

PT1Plant::PT1Plant(const Eigen::VectorXd& initial, double tau) : tau_(tau), state_(initial) {
  if (!(tau > 0.0)) {
    throw DomainError("plant time constant tau must be positive");
  }
  if (!state_.allFinite()) {
    throw DomainError("plant initial state must be finite");
  }
}

void PT1Plant::step(const Eigen::Ref<const Eigen::VectorXd>& command, double dt) {
  require_size(command.size(), static_cast<int>(state_.size()), "plant command");
  if (!(dt > 0.0)) {
    throw DomainError("plant step dt must be positive");
  }
  const double a = std::exp(-dt / tau_);
  state_ = a * state_ + (1.0 - a) * command;
}

void NoiseModel::validate() const {
  if (!(epsilon >= 0.0)) {
    throw DomainError("noise half-width epsilon must be >= 0");
  }
  if (!(resolution >= 0.0)) {
    throw DomainError("sensor resolution must be >= 0");
  }
}

void TrajectorySpec::validate() const {
  if (waypoints.size() < 2) {
    throw DomainError("trajectory needs at least 2 waypoints, got " +
                      std::to_string(waypoints.size()));
  }
  if (!(v_max > 0.0) || !(a_max > 0.0) || !(d_max > 0.0)) {
    throw DomainError("trajectory limits v_max, a_max, d_max must be positive");
  }
  if (!(hold >= 0.0)) {
    throw DomainError("trajectory hold time must be >= 0");
  }
}

double trapezoid_duration(double distance, double v_max, double a_max, double d_max) {
  if (distance <= 0.0) {
    return 0.0;
  }
  const double ramps = v_max * v_max * (1.0 / (2.0 * a_max) + 1.0 / (2.0 * d_max));
  if (distance >= ramps) {
    return distance / v_max + v_max / (2.0 * a_max) + v_max / (2.0 * d_max);
  }
  const double v_peak = std::sqrt(2.0 * distance * a_max * d_max / (a_max + d_max));
  return v_peak / a_max + v_peak / d_max;
}

double trapezoid_position(double t, double distance, double v_max, double a_max, double d_max) {
  if (distance <= 0.0 || t <= 0.0) {
    return 0.0;
  }
  const double ramps = v_max * v_max * (1.0 / (2.0 * a_max) + 1.0 / (2.0 * d_max));
  const double v_peak =
      distance >= ramps ? v_max : std::sqrt(2.0 * distance * a_max * d_max / (a_max + d_max));
  const double t_acc = v_peak / a_max;
  const double t_dec = v_peak / d_max;
  const double s_acc = 0.5 * a_max * t_acc * t_acc;
  const double s_dec = 0.5 * d_max * t_dec * t_dec;
  const double t_cruise = (distance - s_acc - s_dec) / v_peak;
  const double total = t_acc + std::max(t_cruise, 0.0) + t_dec;
  if (t >= total) {
    return distance;
  }
  if (t < t_acc) {
    return 0.5 * a_max * t * t;
  }
  if (t < t_acc + t_cruise) {
    return s_acc + v_peak * (t - t_acc);
  }
  const double remaining = total - t;
  return distance - 0.5 * d_max * remaining * remaining;
}

ClarkeTrajectory generate_clarke_trajectory(const TrajectorySpec& spec, double dt) {
  spec.validate();
  if (!(dt > 0.0)) {
    throw DomainError("trajectory sample time dt must be positive");
  }
  struct Segment {
    Eigen::Vector2d start;
    Eigen::Vector2d delta;
    double distance;
    double begin;
    double duration;
  };
  std::vector<Segment> segments;
  double clock = 0.0;
  for (std::size_t i = 0; i + 1 < spec.waypoints.size(); ++i) {
    const Eigen::Vector2d a = spec.waypoints[i].vec();
    const Eigen::Vector2d delta = spec.waypoints[i + 1].vec() - a;
    const double distance = delta.cwiseAbs().maxCoeff();
    const double duration = trapezoid_duration(distance, spec.v_max, spec.a_max, spec.d_max);
    segments.push_back({a, delta, distance, clock, duration});
    clock += duration;
  }
  const double total = clock + spec.hold;
  const Eigen::Vector2d goal = spec.waypoints.back().vec();

  ClarkeTrajectory out;
  const auto ticks = total > 0.0 ? static_cast<std::size_t>(std::ceil(total / dt - 1e-9)) + 1 : 1;
  out.time.reserve(ticks);
  out.xi.reserve(ticks);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    while (seg < segments.size() && t >= segments[seg].begin + segments[seg].duration) {
      ++seg;
    }
    Eigen::Vector2d xi = goal;
    if (seg < segments.size()) {
      const Segment& s = segments[seg];
      const double along =
          trapezoid_position(t - s.begin, s.distance, spec.v_max, spec.a_max, spec.d_max);
      xi = s.start + s.delta * (along / s.distance);
    }
    out.time.push_back(t);
    out.xi.push_back(ClarkeCoordinates::from(xi));
  }
  return out;
}

SimTrace generate_trajectory(const TrajectorySpec& spec, const SegmentGeometry& geometry, double dt) {
  const ClarkeTrajectory traj = generate_clarke_trajectory(spec, dt);
  SimTrace trace;
  trace.n = geometry.n();
  trace.time = traj.time;
  trace.rho_desired.resize(trace.n, static_cast<Eigen::Index>(traj.xi.size()));
  for (std::size_t k = 0; k < traj.xi.size(); ++k) {
    trace.rho_desired.col(static_cast<Eigen::Index>(k)) =
        geometry.transform().inverse_transform(traj.xi[k]);
  }
  return trace;
}

SimTrace run_simulation(const ControllerConfig& cfg, PT1Plant plant, const NoiseModel& noise,
                        const ClarkeTrajectory& trajectory, LoopMode mode) {
  cfg.validate();
  noise.validate();
  const ClarkeTransform& t = cfg.geometry.transform();
  const int n = t.n();
  require_size(plant.state().size(), n, "plant state");
  const auto ticks = static_cast<Eigen::Index>(trajectory.xi.size());

  SimTrace trace;
  trace.n = n;
  trace.time = trajectory.time;
  trace.rho_desired.resize(n, ticks);
  trace.rho_measured.resize(n, ticks);
  trace.rho_command.resize(n, ticks);
  trace.rho_plant.resize(n, ticks);

  UniformSource rng(noise.seed);
  Eigen::VectorXd measured(n);
  for (Eigen::Index k = 0; k < ticks; ++k) {
    const ClarkeCoordinates& xi_d = trajectory.xi[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) {
      double reading = plant.state()(i) + noise.epsilon * (2.0 * rng.next() - 1.0);
      if (noise.resolution > 0.0) {
        reading = std::nearbyint(reading / noise.resolution) * noise.resolution;
      }
      measured(i) = reading + noise.bias;
    }
    const Displacement desired = t.inverse_transform(xi_d);
    const Displacement command =
        mode == LoopMode::ClosedLoop ? controller_step(cfg, xi_d, measured) : desired;
    plant.step(command, cfg.dt);
    trace.rho_desired.col(k) = desired;
    trace.rho_measured.col(k) = measured;
    trace.rho_command.col(k) = command;
    trace.rho_plant.col(k) = plant.state();
  }
  return trace;
}

double clarke_rms_error(const SimTrace& trace, const ClarkeTransform& transform) {
  const auto ticks = trace.rho_plant.cols();
  if (ticks == 0) {
    return 0.0;
  }
  const Eigen::MatrixXd err = transform.forward() * (trace.rho_desired - trace.rho_plant);
  return std::sqrt(err.colwise().squaredNorm().sum() / static_cast<double>(ticks));
}

std::vector<ClarkeCoordinates> sample_waypoints(const JointLayout& layout, std::size_t count,
                                                double inner_radius, double max_radius,
                                                std::uint64_t seed) {
  if (count < 2) {
    throw DomainError("need at least 2 waypoints");
  }
  SamplerConfig cfg{layout, inner_radius, max_radius, 1e-5, seed};
  const SampleBatch batch = sample_direct(cfg, count - 1, RadialProfile::Annulus).batch;
  const ClarkeTransform t(layout);
  std::vector<ClarkeCoordinates> out{ClarkeCoordinates{}};
  for (Eigen::Index k = 0; k < batch.columns.cols(); ++k) {
    out.push_back(t.transform(batch.columns.col(k)));
  }
  return out;
}

ComparisonRun compare_loops(const ControllerConfig& cfg, double tau, const NoiseModel& noise,
                            const ClarkeTrajectory& trajectory) {
  const int n = cfg.geometry.n();
  ComparisonRun run;
  run.closed_loop = run_simulation(cfg, PT1Plant(n, tau), noise, trajectory, LoopMode::ClosedLoop);
  run.open_loop = run_simulation(cfg, PT1Plant(n, tau), noise, trajectory, LoopMode::OpenLoop);
  const ClarkeTransform& t = cfg.geometry.transform();
  run.summary.rms_closed_loop = clarke_rms_error(run.closed_loop, t);
  run.summary.rms_open_loop = clarke_rms_error(run.open_loop, t);
  run.summary.ticks = trajectory.xi.size();
  if (run.closed_loop.rho_command.cols() > 0) {
    run.summary.max_command_sum = run.closed_loop.rho_command.colwise().sum().cwiseAbs().maxCoeff();
  }
  return run;
}

NoiseReport noise_propagation(const JointLayout& layout, double sigma, int joint) {
  const int n = layout.n();
  if (joint < 0 || joint >= n) {
    throw DomainError("joint index " + std::to_string(joint) + " outside [0, " +
                      std::to_string(n - 1) + "]");
  }
  if (!(sigma > 0.0)) {
    throw DomainError("sigma must be positive");
  }
  const ClarkeTransform t(layout);
  const Eigen::MatrixXd p = t.projector();
  NoiseReport r;
  r.n = n;
  r.joint = joint;
  r.sigma = sigma;
  r.spread = p.col(joint) * sigma;
  r.expected.resize(n);
  for (int i = 0; i < n; ++i) {
    r.expected(i) = 2.0 * sigma / n * unit_phasor(i - joint, n).x();
  }
  r.peak = r.spread.cwiseAbs().maxCoeff();
  r.squared_norm = r.spread.squaredNorm();
  r.ratio = r.squared_norm / (sigma * sigma);
  r.unscaled_ratio = n / 2.0;
  r.idempotence_residual = (p * r.spread - r.spread).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace clarke

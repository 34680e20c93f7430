#include "clarke/control_sim.hpp"
#include "clarke/kinematics.hpp"
#include "clarke/sampling.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

using namespace clarke;

constexpr double kPi = std::numbers::pi;

void BM_ClarkeTransform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClarkeTransform t(n);
  const Eigen::VectorXd rho = t.inverse_transform({1e-3, -2e-3});
  for (auto _ : state) {
    benchmark::DoNotOptimize(t.transform(rho));
  }
}
BENCHMARK(BM_ClarkeTransform)->Arg(3)->Arg(4)->Arg(8)->Arg(16);

void BM_ForwardKinematics(benchmark::State& state) {
  const SegmentGeometry g(JointLayout(static_cast<int>(state.range(0)), 0.01), 0.1);
  const Eigen::VectorXd rho = g.transform().inverse_transform({0.01, 0.02});
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_kinematics(g, rho));
  }
}
BENCHMARK(BM_ForwardKinematics)->Arg(3)->Arg(8);

// Arc-parameter route for comparison: extract kappa and theta, then build the pose.
void BM_ForwardViaArc(benchmark::State& state) {
  const SegmentGeometry g(JointLayout(static_cast<int>(state.range(0)), 0.01), 0.1);
  const Eigen::VectorXd rho = g.transform().inverse_transform({0.01, 0.02});
  for (auto _ : state) {
    benchmark::DoNotOptimize(arc_to_pose(g, joint_to_curvature_angle(g, rho)));
  }
}
BENCHMARK(BM_ForwardViaArc)->Arg(3)->Arg(8);

void BM_InversePose(benchmark::State& state) {
  const SegmentGeometry g(JointLayout(4, 0.01), 0.1);
  const Pose target = arc_to_pose(g, {12.0, 0.7});
  for (auto _ : state) {
    benchmark::DoNotOptimize(ik_pose(g, target));
  }
}
BENCHMARK(BM_InversePose);

SamplerConfig sampler(int n) {
  SamplerConfig cfg{JointLayout(n, 1e-3)};
  cfg.rho_min = -1e-3 * kPi;
  cfg.rho_max = 1e-3 * kPi;
  cfg.seed = 42;
  return cfg;
}

void BM_SampleSequential(benchmark::State& state) {
  const auto method = static_cast<SamplingMethod>(state.range(0));
  SamplerConfig cfg = sampler(3);
  if (method == SamplingMethod::DirectAnnulus) {
    cfg.rho_min = 0.5e-3 * kPi;
  }
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(cfg, k, method).batch.columns.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.SetLabel(std::string(1, method_letter(method)));
}
BENCHMARK(BM_SampleSequential)
    ->ArgsProduct({{0, 1, 2, 3, 4}, {10000}})
    ->Unit(benchmark::kMillisecond);

void BM_SampleBatched(benchmark::State& state) {
  const auto radial = static_cast<RadialProfile>(state.range(0));
  SamplerConfig cfg = sampler(3);
  if (radial == RadialProfile::Annulus) {
    cfg.rho_min = 0.5e-3 * kPi;
  }
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_direct_batched(cfg, k, radial).columns.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_SampleBatched)->ArgsProduct({{0, 1, 2}, {10000}})->Unit(benchmark::kMillisecond);

void BM_ControllerStep(benchmark::State& state) {
  const ControllerConfig cfg{SegmentGeometry(JointLayout(static_cast<int>(state.range(0)), 1e-3), 0.1)};
  const Eigen::VectorXd measured = cfg.geometry.transform().inverse_transform({1e-3, 0.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(controller_step(cfg, {1.1e-3, 2e-4}, measured));
  }
}
BENCHMARK(BM_ControllerStep)->Arg(3)->Arg(8);

void BM_Simulation(benchmark::State& state) {
  const int n = 5;
  const ControllerConfig cfg{SegmentGeometry(JointLayout(n, 1e-3), 0.1)};
  const TrajectorySpec spec{sample_waypoints(cfg.geometry.layout(), 5, 0.5e-3 * kPi, 1e-3 * kPi, 1)};
  const ClarkeTrajectory traj = generate_clarke_trajectory(spec, cfg.dt);
  const NoiseModel noise{2.5e-3, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(cfg, PT1Plant(n, 0.25), noise, traj).rho_plant.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(traj.xi.size()));
}
BENCHMARK(BM_Simulation)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

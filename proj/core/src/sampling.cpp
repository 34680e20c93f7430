#include "clarke/sampling.hpp"

#include "clarke/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace clarke {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double draw_between(UniformSource& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next();
}

double draw_radius(UniformSource& rng, const SamplerConfig& cfg, RadialProfile radial) {
  const double u = rng.next();
  switch (radial) {
    case RadialProfile::Line:
      return cfg.rho_min + (cfg.rho_max - cfg.rho_min) * u;
    case RadialProfile::Disk:
      return cfg.rho_max * std::sqrt(u);
    case RadialProfile::Annulus: {
      const double inner = cfg.rho_min * cfg.rho_min;
      return std::sqrt(inner + (cfg.rho_max * cfg.rho_max - inner) * u);
    }
  }
  return 0.0;
}

// Shared by the sequential and batched paths. Kept out of line so that both
// see the same cos/sin evaluation (the compiler may otherwise fuse the pair
// into sincos in one context only, which can differ in the last bit).
#if defined(__GNUC__)
[[gnu::noinline]]
#endif
Eigen::Vector2d polar_point(double radius, double theta) {
  return {radius * std::cos(theta), radius * std::sin(theta)};
}

void validate_direct(const SamplerConfig& cfg, RadialProfile radial) {
  cfg.validate();
  if (radial == RadialProfile::Annulus && !(cfg.rho_min > 0.0)) {
    throw DomainError("annulus sampling requires rho_max > rho_min > 0");
  }
}

SamplingStats finish_stats(SamplingMethod method, std::size_t k, std::uint64_t iterations,
                           double wall_time) {
  SamplingStats stats;
  stats.method = method;
  stats.wall_time = wall_time;
  stats.iterations = iterations;
  stats.resamples = iterations - k;
  stats.success_rate = iterations == 0 ? 1.0 : static_cast<double>(k) / static_cast<double>(iterations);
  return stats;
}

void check_cap(const SamplerConfig& cfg, std::uint64_t iterations, std::size_t accepted,
               std::size_t k) {
  if (iterations >= cfg.iteration_cap) {
    throw IterationCapError("rejection sampler hit the iteration cap of " +
                            std::to_string(cfg.iteration_cap) + " after accepting " +
                            std::to_string(accepted) + " of " + std::to_string(k) + " samples");
  }
}

}  // namespace

char method_letter(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::RejectionIndependent: return 'a';
    case SamplingMethod::RejectionResolved: return 'b';
    case SamplingMethod::DirectLine: return 'c';
    case SamplingMethod::DirectDisk: return 'd';
    case SamplingMethod::DirectAnnulus: return 'e';
  }
  return '?';
}

SamplingMethod parse_method(std::string_view text) {
  if (text.size() == 1) {
    switch (text.front()) {
      case 'a': case 'A': return SamplingMethod::RejectionIndependent;
      case 'b': case 'B': return SamplingMethod::RejectionResolved;
      case 'c': case 'C': return SamplingMethod::DirectLine;
      case 'd': case 'D': return SamplingMethod::DirectDisk;
      case 'e': case 'E': return SamplingMethod::DirectAnnulus;
      default: break;
    }
  }
  throw std::invalid_argument("unknown sampling method '" + std::string(text) +
                              "', expected one of a, b, c, d, e");
}

bool is_direct(SamplingMethod method) {
  return method == SamplingMethod::DirectLine || method == SamplingMethod::DirectDisk ||
         method == SamplingMethod::DirectAnnulus;
}

RadialProfile radial_profile(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::DirectDisk: return RadialProfile::Disk;
    case SamplingMethod::DirectAnnulus: return RadialProfile::Annulus;
    case SamplingMethod::DirectLine: return RadialProfile::Line;
    default: break;
  }
  throw UnsupportedMethodError(std::string("method ") + method_letter(method) +
                               " is not a direct sampler");
}

SamplingMethod direct_method(RadialProfile radial) {
  switch (radial) {
    case RadialProfile::Line: return SamplingMethod::DirectLine;
    case RadialProfile::Disk: return SamplingMethod::DirectDisk;
    case RadialProfile::Annulus: return SamplingMethod::DirectAnnulus;
  }
  return SamplingMethod::DirectLine;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void SamplerConfig::validate() const {
  if (!(rho_max > rho_min)) {
    throw DomainError("sampler bounds need rho_max > rho_min");
  }
  if (!(rounding_epsilon > 0.0)) {
    throw DomainError("rounding epsilon must be positive");
  }
}

SamplingResult sample_rejection_independent(const SamplerConfig& cfg, std::size_t k) {
  cfg.validate();
  const int n = cfg.layout.n();
  const double eps = cfg.rounding_epsilon;
  UniformSource rng(cfg.seed);
  SamplingResult result;
  result.batch.method = SamplingMethod::RejectionIndependent;
  result.batch.columns.resize(n, static_cast<Eigen::Index>(k));

  std::vector<double> lattice(static_cast<std::size_t>(n));
  std::uint64_t iterations = 0;
  std::size_t accepted = 0;
  const auto start = Clock::now();
  while (accepted < k) {
    check_cap(cfg, iterations, accepted, k);
    ++iterations;
    // Values are rounded to the epsilon lattice (ties to even) and the
    // constraint is checked on integer lattice indices.
    long long index_sum = 0;
    bool in_bounds = true;
    for (int i = 0; i < n; ++i) {
      const double q = std::nearbyint(draw_between(rng, cfg.rho_min, cfg.rho_max) / eps);
      lattice[static_cast<std::size_t>(i)] = q;
      index_sum += static_cast<long long>(q);
      const double value = q * eps;
      in_bounds = in_bounds && value >= cfg.rho_min && value <= cfg.rho_max;
    }
    if (index_sum != 0 || !in_bounds) {
      continue;
    }
    for (int i = 0; i < n; ++i) {
      result.batch.columns(i, static_cast<Eigen::Index>(accepted)) =
          lattice[static_cast<std::size_t>(i)] * eps;
    }
    ++accepted;
  }
  result.stats = finish_stats(SamplingMethod::RejectionIndependent, k, iterations, seconds_since(start));
  return result;
}

SamplingResult sample_rejection_resolved(const SamplerConfig& cfg, std::size_t k) {
  cfg.validate();
  if (cfg.layout.n() != 3) {
    throw UnsupportedMethodError("rejection sampler (b) resolves rho_1 = -rho_2 - rho_3 and is "
                                 "defined for n = 3 only, got n = " +
                                 std::to_string(cfg.layout.n()));
  }
  UniformSource rng(cfg.seed);
  SamplingResult result;
  result.batch.method = SamplingMethod::RejectionResolved;
  result.batch.columns.resize(3, static_cast<Eigen::Index>(k));

  std::uint64_t iterations = 0;
  std::size_t accepted = 0;
  const auto start = Clock::now();
  while (accepted < k) {
    check_cap(cfg, iterations, accepted, k);
    ++iterations;
    const double rho2 = draw_between(rng, cfg.rho_min, cfg.rho_max);
    const double rho3 = draw_between(rng, cfg.rho_min, cfg.rho_max);
    const double rho1 = -rho2 - rho3;
    if (rho1 < cfg.rho_min || rho1 > cfg.rho_max) {
      continue;
    }
    const auto col = static_cast<Eigen::Index>(accepted);
    result.batch.columns(0, col) = rho1;
    result.batch.columns(1, col) = rho2;
    result.batch.columns(2, col) = rho3;
    ++accepted;
  }
  result.stats = finish_stats(SamplingMethod::RejectionResolved, k, iterations, seconds_since(start));
  return result;
}

SamplingResult sample_direct(const SamplerConfig& cfg, std::size_t k, RadialProfile radial) {
  validate_direct(cfg, radial);
  const ClarkeTransform transform(cfg.layout);
  const auto& inv = transform.inverse();
  UniformSource rng(cfg.seed);
  SamplingResult result;
  result.batch.method = direct_method(radial);
  result.batch.columns.resize(cfg.layout.n(), static_cast<Eigen::Index>(k));

  const auto start = Clock::now();
  for (std::size_t s = 0; s < k; ++s) {
    const double theta = kTwoPi * rng.next();
    const double radius = draw_radius(rng, cfg, radial);
    const Eigen::Vector2d xi = polar_point(radius, theta);
    const Displacement rho = inv.col(0) * xi.x() + inv.col(1) * xi.y();
    result.batch.columns.col(static_cast<Eigen::Index>(s)) = rho;
  }
  result.stats = finish_stats(direct_method(radial), k, k, seconds_since(start));
  return result;
}

SamplingResult sample_direct_batched_timed(const SamplerConfig& cfg, std::size_t k,
                                           RadialProfile radial) {
  validate_direct(cfg, radial);
  const ClarkeTransform transform(cfg.layout);
  const auto& inv = transform.inverse();
  UniformSource rng(cfg.seed);
  const auto count = static_cast<Eigen::Index>(k);
  SamplingResult result;
  result.batch.method = direct_method(radial);
  result.batch.columns.resize(cfg.layout.n(), count);
  Eigen::Matrix<double, 2, Eigen::Dynamic> xi(2, count);

  const auto start = Clock::now();
  for (Eigen::Index s = 0; s < count; ++s) {
    const double theta = kTwoPi * rng.next();
    const double radius = draw_radius(rng, cfg, radial);
    xi.col(s) = polar_point(radius, theta);
  }
  // One product over the stacked 2 x k Clarke matrix, written as two rank-1
  // terms so each entry is rounded exactly as in the sequential path.
  result.batch.columns.noalias() = inv.col(0) * xi.row(0) + inv.col(1) * xi.row(1);
  const double elapsed = seconds_since(start);

  result.stats = finish_stats(direct_method(radial), k, k == 0 ? 0 : 1, elapsed);
  result.stats.resamples = 0;
  result.stats.success_rate = 1.0;
  result.stats.vectorized = true;
  return result;
}

SampleBatch sample_direct_batched(const SamplerConfig& cfg, std::size_t k, RadialProfile radial) {
  return sample_direct_batched_timed(cfg, k, radial).batch;
}

SamplingResult sample(const SamplerConfig& cfg, std::size_t k, SamplingMethod method) {
  switch (method) {
    case SamplingMethod::RejectionIndependent: return sample_rejection_independent(cfg, k);
    case SamplingMethod::RejectionResolved: return sample_rejection_resolved(cfg, k);
    default: return sample_direct(cfg, k, radial_profile(method));
  }
}

double Histogram::bin_lo(std::size_t i) const {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size());
}

double Histogram::bin_hi(std::size_t i) const {
  return i + 1 == counts.size() ? hi : bin_lo(i + 1);
}

Histogram make_histogram(const Eigen::Ref<const Eigen::VectorXd>& values, double lo, double hi,
                         std::size_t bins) {
  if (!(hi > lo) || bins == 0) {
    throw DomainError("histogram needs hi > lo and at least one bin");
  }
  Histogram h{lo, hi, std::vector<std::uint64_t>(bins, 0), 0};
  const double width = (hi - lo) / static_cast<double>(bins);
  for (const double v : values) {
    if (!(v >= lo && v <= hi)) {
      ++h.outside;
      continue;
    }
    auto bin = static_cast<std::size_t>((v - lo) / width);
    h.counts[std::min(bin, bins - 1)] += 1;
  }
  return h;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Sample standard deviation (n - 1), zero for fewer than two runs.
double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) {
    return 0.0;
  }
  const double m = mean_of(xs);
  double acc = 0.0;
  for (const double x : xs) {
    acc += (x - m) * (x - m);
  }
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

MethodSummary summarize(std::string label, SamplingMethod method, bool vectorized,
                        std::vector<SamplingStats> runs) {
  MethodSummary s;
  s.label = std::move(label);
  s.method = method;
  s.vectorized = vectorized;
  std::vector<double> times;
  std::vector<double> iterations;
  std::vector<double> resamples;
  std::uint64_t total_iterations = 0;
  for (const auto& r : runs) {
    times.push_back(r.wall_time);
    iterations.push_back(static_cast<double>(r.iterations));
    resamples.push_back(static_cast<double>(r.resamples));
    total_iterations += r.iterations;
  }
  s.time_mean = mean_of(times);
  s.time_std = std_of(times);
  s.iterations_mean = mean_of(iterations);
  s.iterations_std = std_of(iterations);
  s.resamples_mean = mean_of(resamples);
  std::uint64_t total_accepted = 0;
  for (const auto& r : runs) {
    total_accepted += r.iterations - r.resamples;
  }
  s.success_rate = total_iterations == 0
                       ? 1.0
                       : static_cast<double>(total_accepted) / static_cast<double>(total_iterations);
  if (vectorized) {
    s.success_rate = 1.0;
  }
  s.runs = std::move(runs);
  return s;
}

}  // namespace

BenchmarkReport benchmark(const BenchmarkConfig& cfg) {
  if (cfg.k == 0 || cfg.runs < 1) {
    throw DomainError("benchmark needs k >= 1 and at least one run");
  }
  cfg.sampler.validate();
  const int n = cfg.sampler.layout.n();
  BenchmarkReport report;
  std::vector<MethodSummary> vectorized;

  for (const SamplingMethod method : cfg.methods) {
    SamplerConfig sampler = cfg.sampler;
    if (method == SamplingMethod::DirectAnnulus) {
      sampler.rho_min = cfg.annulus_inner;
    }
    std::vector<SamplingStats> runs;
    std::vector<SamplingStats> vec_runs;
    Eigen::MatrixXd pooled(n, static_cast<Eigen::Index>(cfg.k) * cfg.runs);
    const auto method_index = static_cast<std::uint64_t>(method);
    for (int run = 0; run < cfg.runs; ++run) {
      sampler.seed = derive_seed(cfg.sampler.seed, 16 * method_index + static_cast<std::uint64_t>(run));
      SamplingResult r = sample(sampler, cfg.k, method);
      pooled.middleCols(static_cast<Eigen::Index>(cfg.k) * run, static_cast<Eigen::Index>(cfg.k)) =
          r.batch.columns;
      runs.push_back(r.stats);
      if (cfg.include_vectorized && is_direct(method)) {
        vec_runs.push_back(sample_direct_batched_timed(sampler, cfg.k, radial_profile(method)).stats);
      }
    }
    MethodSummary summary = summarize(std::string(1, method_letter(method)), method, false, std::move(runs));
    for (int j = 0; j < n; ++j) {
      summary.joint_histograms.push_back(
          make_histogram(pooled.row(j).transpose(), cfg.sampler.rho_min, cfg.sampler.rho_max, cfg.bins));
    }
    report.methods.push_back(std::move(summary));
    if (!vec_runs.empty()) {
      vectorized.push_back(summarize(std::string(1, method_letter(method)) + "_vec", method, true,
                                     std::move(vec_runs)));
    }
  }
  for (auto& v : vectorized) {
    report.methods.push_back(std::move(v));
  }

  // Factors are relative to the sequential line sampler (c) when it ran.
  double reference = report.methods.empty() ? 0.0 : report.methods.front().time_mean;
  for (const auto& m : report.methods) {
    if (m.method == SamplingMethod::DirectLine && !m.vectorized) {
      reference = m.time_mean;
    }
  }
  for (auto& m : report.methods) {
    m.factor = reference > 0.0 ? m.time_mean / reference : 0.0;
  }
  return report;
}

}  // namespace clarke

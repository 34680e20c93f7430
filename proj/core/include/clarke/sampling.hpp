#pragma once

// Joint-space samplers for a displacement-actuated segment.
//
//   (a) rejection, all n joints drawn independently, accepted when the sum
//       rounds to zero at the configured granularity
//   (b) rejection, n = 3: rho_1 = -rho_2 - rho_3, accepted when rho_1 is in bounds
//   (c) direct, L uniform on a line      L = rho_min + (rho_max - rho_min) U
//   (d) direct, L uniform over a disk    L = rho_max sqrt(U)
//   (e) direct, L uniform over an annulus L = sqrt(rho_min^2 + (rho_max^2 - rho_min^2) U)
//
// Direct samples are M_inv [L cos theta; L sin theta] with theta = 2 pi U and
// never need resampling. Draw order per sample is theta first, then L.

#include "clarke/clarke_core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace clarke {

enum class SamplingMethod {
  RejectionIndependent,  // (a)
  RejectionResolved,     // (b)
  DirectLine,            // (c)
  DirectDisk,            // (d)
  DirectAnnulus,         // (e)
};

enum class RadialProfile { Line, Disk, Annulus };

char method_letter(SamplingMethod method);
/// Accepts "a".."e" (case-insensitive). Throws std::invalid_argument otherwise.
SamplingMethod parse_method(std::string_view text);
bool is_direct(SamplingMethod method);
RadialProfile radial_profile(SamplingMethod method);
SamplingMethod direct_method(RadialProfile radial);

/// Uniform [0, 1) doubles from a 64-bit Mersenne Twister, using the top 53 bits
/// of each output so the stream is identical on every platform.
class UniformSource {
public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

struct SamplerConfig {
  JointLayout layout;
  double rho_min = 0.0;                 ///< meters
  double rho_max = 0.0;                 ///< meters
  double rounding_epsilon = 1e-5;       ///< constraint-check granularity, meters
  std::uint64_t seed = 0;
  std::uint64_t iteration_cap = 100'000'000;  ///< per request, rejection methods only

  /// Throws DomainError when rho_max <= rho_min or rounding_epsilon <= 0.
  void validate() const;
};

struct SampleBatch {
  Eigen::MatrixXd columns;  ///< n x k, one sample per column
  SamplingMethod method = SamplingMethod::DirectLine;
};

struct SamplingStats {
  SamplingMethod method = SamplingMethod::DirectLine;
  bool vectorized = false;
  double wall_time = 0.0;  ///< seconds
  std::uint64_t iterations = 0;
  std::uint64_t resamples = 0;
  double success_rate = 1.0;  ///< accepted / iterations; 1 for an empty request
};

struct SamplingResult {
  SampleBatch batch;
  SamplingStats stats;
};

SamplingResult sample_rejection_independent(const SamplerConfig& cfg, std::size_t k);

/// Defined for n = 3 only; throws UnsupportedMethodError otherwise.
SamplingResult sample_rejection_resolved(const SamplerConfig& cfg, std::size_t k);

/// One sample per loop iteration. Annulus requires rho_min > 0.
SamplingResult sample_direct(const SamplerConfig& cfg, std::size_t k, RadialProfile radial);

/// All angles and radii drawn first, then a single M_inv product over the
/// 2 x k Clarke matrix. Bit-identical to sample_direct for the same config.
SampleBatch sample_direct_batched(const SamplerConfig& cfg, std::size_t k, RadialProfile radial);
SamplingResult sample_direct_batched_timed(const SamplerConfig& cfg, std::size_t k,
                                           RadialProfile radial);

SamplingResult sample(const SamplerConfig& cfg, std::size_t k, SamplingMethod method);

// -- Monte-Carlo benchmark ------------------------------------------------------

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t outside = 0;  ///< values outside [lo, hi]

  double bin_lo(std::size_t i) const;
  double bin_hi(std::size_t i) const;
};

/// Fixed-width bins over [lo, hi]; the top edge is inclusive.
Histogram make_histogram(const Eigen::Ref<const Eigen::VectorXd>& values, double lo, double hi,
                         std::size_t bins);

struct BenchmarkConfig {
  SamplerConfig sampler;  ///< rho_min/rho_max for (a)-(d) and histogram range
  double annulus_inner = 0.0;  ///< inner radius for (e); must be > 0 when (e) runs
  std::size_t k = 1000;
  int runs = 5;
  std::vector<SamplingMethod> methods;
  bool include_vectorized = true;  ///< also time the batched form of (c)-(e)
  std::size_t bins = 50;
};

struct MethodSummary {
  std::string label;  ///< "a".."e", or "c_vec".."e_vec" for the batched form
  SamplingMethod method = SamplingMethod::DirectLine;
  bool vectorized = false;
  double time_mean = 0.0;
  double time_std = 0.0;
  double factor = 0.0;  ///< time_mean relative to sequential (c), or to the first method
  double iterations_mean = 0.0;
  double iterations_std = 0.0;
  double resamples_mean = 0.0;
  double success_rate = 0.0;  ///< pooled: runs * k / total iterations
  std::vector<SamplingStats> runs;
  std::vector<Histogram> joint_histograms;  ///< pooled over all runs, one per joint
};

struct BenchmarkReport {
  std::vector<MethodSummary> methods;
};

/// Runs every method `runs` times with independent seed streams
/// derive_seed(seed, 16 * method + run).
BenchmarkReport benchmark(const BenchmarkConfig& cfg);

}  // namespace clarke

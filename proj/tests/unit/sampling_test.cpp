#include "clarke/errors.hpp"
#include "clarke/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace clarke;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRhoMax = 1e-3 * kPi;

SamplerConfig config(int n, double rho_min, double rho_max, std::uint64_t seed = 7) {
  SamplerConfig cfg{JointLayout(n, 1e-3)};
  cfg.rho_min = rho_min;
  cfg.rho_max = rho_max;
  cfg.seed = seed;
  return cfg;
}

Eigen::VectorXd clarke_radius(const Eigen::MatrixXd& columns) {
  const ClarkeTransform t(static_cast<int>(columns.rows()));
  return (t.forward() * columns).colwise().norm().transpose();
}

TEST(SamplingMethods, LettersRoundTrip) {
  for (const char c : std::string("abcde")) {
    EXPECT_EQ(method_letter(parse_method(std::string(1, c))), c);
  }
  EXPECT_EQ(parse_method("D"), SamplingMethod::DirectDisk);
  EXPECT_THROW(parse_method("f"), std::invalid_argument);
  EXPECT_THROW(parse_method(""), std::invalid_argument);
  EXPECT_FALSE(is_direct(SamplingMethod::RejectionResolved));
  EXPECT_EQ(direct_method(RadialProfile::Annulus), SamplingMethod::DirectAnnulus);
  EXPECT_EQ(radial_profile(SamplingMethod::DirectLine), RadialProfile::Line);
}

TEST(SamplingMethods, ConfigValidation) {
  EXPECT_THROW(config(3, 1.0, 1.0).validate(), DomainError);
  SamplerConfig cfg = config(3, -1.0, 1.0);
  cfg.rounding_epsilon = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  EXPECT_THROW(sample(config(3, 0.0, kRhoMax), 10, SamplingMethod::DirectAnnulus), DomainError);
  EXPECT_THROW(sample(config(3, -kRhoMax, kRhoMax), 10, SamplingMethod::DirectAnnulus), DomainError);
  EXPECT_THROW(sample(config(4, -kRhoMax, kRhoMax), 10, SamplingMethod::RejectionResolved),
               UnsupportedMethodError);
}

TEST(SamplingMethods, EmptyRequests) {
  for (const char c : std::string("abcde")) {
    const SamplingMethod m = parse_method(std::string(1, c));
    const SamplingResult r = sample(config(3, 0.1 * kRhoMax, kRhoMax), 0, m);
    EXPECT_EQ(r.batch.columns.cols(), 0);
    EXPECT_EQ(r.batch.columns.rows(), 3);
    EXPECT_EQ(r.stats.iterations, 0u);
    EXPECT_EQ(r.stats.success_rate, 1.0);
  }
}

TEST(DirectSampling, SamplesLieOnManifold) {
  for (const int n : {3, 4, 5, 8, 12}) {
    const ClarkeTransform t(n);
    for (const RadialProfile radial : {RadialProfile::Line, RadialProfile::Disk, RadialProfile::Annulus}) {
      const SamplingResult r = sample_direct(config(n, 0.3 * kRhoMax, kRhoMax), 2000, radial);
      EXPECT_EQ(r.stats.iterations, 2000u);
      EXPECT_EQ(r.stats.resamples, 0u);
      EXPECT_EQ(r.stats.success_rate, 1.0);
      for (Eigen::Index j = 0; j < r.batch.columns.cols(); ++j) {
        ASSERT_TRUE(is_on_manifold(t, r.batch.columns.col(j), 1e-12));
      }
    }
  }
}

TEST(DirectSampling, RadialDistributions) {
  constexpr std::size_t k = 100000;
  const Eigen::VectorXd disk =
      clarke_radius(sample_direct(config(4, 0.0, kRhoMax), k, RadialProfile::Disk).batch.columns);
  EXPECT_NEAR(disk.array().square().mean(), kRhoMax * kRhoMax / 2.0, 0.01 * kRhoMax * kRhoMax / 2.0);
  EXPECT_LE(disk.maxCoeff(), kRhoMax * (1 + 1e-12));

  const double inner = 0.5 * kRhoMax;
  const Eigen::VectorXd ring =
      clarke_radius(sample_direct(config(5, inner, kRhoMax), k, RadialProfile::Annulus).batch.columns);
  EXPECT_GE(ring.minCoeff(), inner * (1 - 1e-12));
  EXPECT_LE(ring.maxCoeff(), kRhoMax * (1 + 1e-12));
  // Uniform over the ring area: E[L^2] is the midpoint of the squared radii.
  const double expected = (inner * inner + kRhoMax * kRhoMax) / 2.0;
  EXPECT_NEAR(ring.array().square().mean(), expected, 0.01 * expected);

  const Eigen::VectorXd line =
      clarke_radius(sample_direct(config(3, 0.0, kRhoMax), k, RadialProfile::Line).batch.columns);
  EXPECT_NEAR(line.mean(), kRhoMax / 2.0, 0.01 * kRhoMax);

  // The line profile crowds the center: half of its mass sits inside
  // rho_max / 2 against a quarter for the disk.
  const double line_inner = (line.array() < kRhoMax / 2).cast<double>().mean();
  const double disk_inner = (disk.array() < kRhoMax / 2).cast<double>().mean();
  EXPECT_NEAR(line_inner, 0.5, 0.01);
  EXPECT_NEAR(disk_inner, 0.25, 0.01);
  EXPECT_GE(line_inner - disk_inner, 0.2);
}

TEST(DirectSampling, BatchedMatchesSequentialBitForBit) {
  for (const int n : {3, 5, 8}) {
    for (const RadialProfile radial : {RadialProfile::Line, RadialProfile::Disk, RadialProfile::Annulus}) {
      const SamplerConfig cfg = config(n, 0.2 * kRhoMax, kRhoMax, 1234 + n);
      const Eigen::MatrixXd seq = sample_direct(cfg, 5000, radial).batch.columns;
      const Eigen::MatrixXd vec = sample_direct_batched(cfg, 5000, radial).columns;
      ASSERT_EQ(seq.cols(), vec.cols());
      EXPECT_TRUE((seq.array() == vec.array()).all()) << n;
      const SamplingResult timed = sample_direct_batched_timed(cfg, 5000, radial);
      EXPECT_TRUE(timed.stats.vectorized);
      EXPECT_TRUE((timed.batch.columns.array() == seq.array()).all());
    }
  }
}

TEST(DirectSampling, SeedDeterminism) {
  const SamplerConfig a = config(4, 0.0, kRhoMax, 99);
  const Eigen::MatrixXd first = sample(a, 1000, SamplingMethod::DirectDisk).batch.columns;
  const Eigen::MatrixXd second = sample(a, 1000, SamplingMethod::DirectDisk).batch.columns;
  EXPECT_TRUE((first.array() == second.array()).all());
  const Eigen::MatrixXd other = sample(config(4, 0.0, kRhoMax, 100), 1000, SamplingMethod::DirectDisk).batch.columns;
  EXPECT_FALSE((first.array() == other.array()).all());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(RejectionSampling, IndependentJointsSatisfyConstraint) {
  SamplerConfig cfg = config(3, -kRhoMax, kRhoMax);
  cfg.rounding_epsilon = 1e-4;
  const SamplingResult r = sample_rejection_independent(cfg, 20000);
  const Eigen::MatrixXd& s = r.batch.columns;
  ASSERT_EQ(s.cols(), 20000);
  EXPECT_LE(s.colwise().sum().cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GE(s.minCoeff(), -kRhoMax);
  EXPECT_LE(s.maxCoeff(), kRhoMax);
  EXPECT_EQ(r.stats.iterations - r.stats.resamples, 20000u);
  EXPECT_NEAR(r.stats.success_rate, 20000.0 / static_cast<double>(r.stats.iterations), 1e-15);

  // Symmetric bounds give a symmetric joint distribution.
  const Eigen::ArrayXd x = s.row(0).transpose().array();
  const double mean = x.mean();
  const double var = (x - mean).square().mean();
  const double skew = (x - mean).cube().mean() / std::pow(var, 1.5);
  EXPECT_LT(std::abs(skew), 0.05);
}

TEST(RejectionSampling, ResolvedJointMatchesAcceptanceArea) {
  const SamplingResult r = sample_rejection_resolved(config(3, -kRhoMax, kRhoMax), 40000);
  const Eigen::MatrixXd& s = r.batch.columns;
  EXPECT_LE(s.colwise().sum().cwiseAbs().maxCoeff(), 1e-18);
  EXPECT_GE(s.minCoeff(), -kRhoMax);
  EXPECT_LE(s.maxCoeff(), kRhoMax);
  // |rho_2 + rho_3| <= rho_max covers three quarters of the square.
  EXPECT_NEAR(r.stats.success_rate, 0.75, 0.01);
}

TEST(RejectionSampling, IterationCap) {
  SamplerConfig cfg = config(3, -kRhoMax, kRhoMax);
  cfg.iteration_cap = 10;
  EXPECT_THROW(sample_rejection_independent(cfg, 1000), IterationCapError);
  EXPECT_THROW(sample_rejection_resolved(cfg, 1000), IterationCapError);
}

TEST(Histogram, BinsAndOutliers) {
  const Eigen::VectorXd v = (Eigen::VectorXd(6) << 0.0, 0.25, 0.5, 1.0, 1.5, -0.1).finished();
  const Histogram h = make_histogram(v, 0.0, 1.0, 2);
  ASSERT_EQ(h.counts.size(), 2u);
  EXPECT_EQ(h.counts[0], 2u);
  EXPECT_EQ(h.counts[1], 2u);
  EXPECT_EQ(h.outside, 2u);
  EXPECT_EQ(h.bin_lo(1), 0.5);
  EXPECT_EQ(h.bin_hi(1), 1.0);
  EXPECT_THROW(make_histogram(v, 1.0, 1.0, 2), DomainError);
  EXPECT_THROW(make_histogram(v, 0.0, 1.0, 0), DomainError);
}

TEST(Benchmark, ReportStructure) {
  BenchmarkConfig cfg{config(3, -kRhoMax, kRhoMax), 0.5 * kRhoMax, 300, 3,
                      {SamplingMethod::RejectionResolved, SamplingMethod::DirectLine,
                       SamplingMethod::DirectDisk, SamplingMethod::DirectAnnulus},
                      true, 20};
  const BenchmarkReport report = benchmark(cfg);
  std::vector<std::string> labels;
  for (const auto& m : report.methods) {
    labels.push_back(m.label);
    EXPECT_EQ(m.runs.size(), 3u);
  }
  EXPECT_EQ(labels, (std::vector<std::string>{"b", "c", "d", "e", "c_vec", "d_vec", "e_vec"}));
  EXPECT_EQ(report.methods[1].factor, 1.0);
  for (std::size_t i = 1; i < report.methods.size(); ++i) {
    EXPECT_EQ(report.methods[i].success_rate, 1.0);
    EXPECT_EQ(report.methods[i].resamples_mean, 0.0);
  }
  EXPECT_LT(report.methods[0].success_rate, 1.0);
  for (std::size_t i = 0; i < 4; ++i) {
    ASSERT_EQ(report.methods[i].joint_histograms.size(), 3u);
    for (const Histogram& h : report.methods[i].joint_histograms) {
      const auto total = std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}) + h.outside;
      EXPECT_EQ(total, 900u);
      EXPECT_EQ(h.outside, 0u);
    }
  }

  cfg.k = 0;
  EXPECT_THROW(benchmark(cfg), DomainError);
}

TEST(Benchmark, AnnulusNeedsInnerRadius) {
  BenchmarkConfig cfg{config(3, -kRhoMax, kRhoMax), 0.0, 10, 1, {SamplingMethod::DirectAnnulus}, true, 10};
  EXPECT_THROW(benchmark(cfg), DomainError);
}

}  // namespace

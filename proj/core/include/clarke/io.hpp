#pragma once

// CSV and JSON serialization for samples, benchmark statistics, simulation
// traces and kinematic results. CSV floats use 17 significant digits so that
// every value survives a write/read cycle bit for bit.

#include "clarke/control_sim.hpp"
#include "clarke/kinematics.hpp"
#include "clarke/sampling.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace clarke::io {

/// Shortest "%.{digits}g" rendering of x.
std::string format_double(double x, int digits = 17);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a header column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
};

/// Parses a header row followed by numeric rows. Blank lines are skipped.
/// Throws std::runtime_error naming the offending line on malformed input.
CsvTable read_csv(std::istream& in);
void write_csv(std::ostream& out, const CsvTable& table, int digits = 17);

/// rho_1..rho_n header, one row per column of `samples`.
void write_samples_csv(std::ostream& out, const Eigen::MatrixXd& samples);
/// Inverse of write_samples_csv: returns the n x k matrix.
Eigen::MatrixXd read_samples_csv(std::istream& in);

/// method,time_s,factor,iterations,resamples,success_rate with one row per method.
void write_stats_csv(std::ostream& out, const BenchmarkReport& report);
std::string benchmark_json(const BenchmarkReport& report, const BenchmarkConfig& cfg);
std::string sampling_stats_json(const SamplingStats& stats, std::size_t k, std::uint64_t seed);

/// bin_lo,bin_hi,count
void write_histogram_csv(std::ostream& out, const Histogram& histogram);

/// Pose columns r11..r33 (row-major), px, py, pz.
std::vector<std::string> pose_header();
std::vector<double> pose_row(const Pose& pose);
Pose pose_from_row(const std::vector<double>& row, std::size_t offset = 0);
std::string pose_json(const Pose& pose);
std::string displacement_json(const Displacement& rho);

/// t, rho_d_*, rho_m_*, rho_cmd_*, rho_plant_*.
void write_trace_csv(std::ostream& out, const SimTrace& trace);
std::string trace_json(const SimTrace& trace);
std::string simulation_summary_json(const SimulationSummary& summary, std::uint64_t seed);

std::string noise_report_json(const NoiseReport& report);

}  // namespace clarke::io

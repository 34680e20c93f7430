#include "clarke/io.hpp"

#include <nlohmann/json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace clarke::io {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    out.push_back(trim(cell));
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || (errno == ERANGE && std::isinf(v))) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": '" + cell +
                             "' is not a number");
  }
  return v;
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) {
    out.push_back(prefix + std::to_string(i));
  }
  return out;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row[static_cast<std::size_t>(j)] = m(i, j);
    }
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::string format_double(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  throw std::out_of_range("CSV has no column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto cells = split(line);
    if (!have_header) {
      table.header = cells;
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.header.size()) + " fields, found " +
                               std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      row.push_back(parse_number(c, line_no));
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw std::runtime_error("CSV input is empty");
  }
  return table;
}

void write_csv(std::ostream& out, const CsvTable& table, int digits) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i], digits);
    }
    out << '\n';
  }
}

void write_samples_csv(std::ostream& out, const Eigen::MatrixXd& samples) {
  CsvTable t;
  t.header = numbered("rho_", static_cast<int>(samples.rows()));
  for (Eigen::Index k = 0; k < samples.cols(); ++k) {
    t.rows.emplace_back(samples.col(k).data(), samples.col(k).data() + samples.rows());
  }
  write_csv(out, t);
}

Eigen::MatrixXd read_samples_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(t.header.size()),
                    static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = t.rows[k][i];
    }
  }
  return m;
}

void write_stats_csv(std::ostream& out, const BenchmarkReport& report) {
  out << "method,time_s,factor,iterations,resamples,success_rate\n";
  for (const auto& m : report.methods) {
    out << m.label << ',' << format_double(m.time_mean) << ',' << format_double(m.factor) << ','
        << format_double(m.iterations_mean) << ',' << format_double(m.resamples_mean) << ','
        << format_double(m.success_rate) << '\n';
  }
}

std::string benchmark_json(const BenchmarkReport& report, const BenchmarkConfig& cfg) {
  json methods = json::array();
  for (const auto& m : report.methods) {
    json runs = json::array();
    for (const auto& r : m.runs) {
      runs.push_back({{"time_s", r.wall_time},
                      {"iterations", r.iterations},
                      {"resamples", r.resamples},
                      {"success_rate", r.success_rate}});
    }
    methods.push_back({{"method", m.label},
                       {"vectorized", m.vectorized},
                       {"time_s_mean", m.time_mean},
                       {"time_s_std", m.time_std},
                       {"factor", m.factor},
                       {"iterations_mean", m.iterations_mean},
                       {"iterations_std", m.iterations_std},
                       {"resamples_mean", m.resamples_mean},
                       {"success_rate", m.success_rate},
                       {"runs", runs}});
  }
  return json{{"n", cfg.sampler.layout.n()},
              {"d", cfg.sampler.layout.d()},
              {"rho_min", cfg.sampler.rho_min},
              {"rho_max", cfg.sampler.rho_max},
              {"annulus_inner", cfg.annulus_inner},
              {"rounding_epsilon", cfg.sampler.rounding_epsilon},
              {"seed", cfg.sampler.seed},
              {"k", cfg.k},
              {"runs", cfg.runs},
              {"methods", methods}}
      .dump(2);
}

std::string sampling_stats_json(const SamplingStats& stats, std::size_t k, std::uint64_t seed) {
  return json{{"method", std::string(1, method_letter(stats.method))},
              {"vectorized", stats.vectorized},
              {"k", k},
              {"seed", seed},
              {"time_s", stats.wall_time},
              {"iterations", stats.iterations},
              {"resamples", stats.resamples},
              {"success_rate", stats.success_rate}}
      .dump(2);
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    out << format_double(histogram.bin_lo(i)) << ',' << format_double(histogram.bin_hi(i)) << ','
        << histogram.counts[i] << '\n';
  }
}

std::vector<std::string> pose_header() {
  return {"r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33", "px", "py", "pz"};
}

std::vector<double> pose_row(const Pose& pose) {
  std::vector<double> row;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      row.push_back(pose.rotation(i, j));
    }
  }
  for (int i = 0; i < 3; ++i) {
    row.push_back(pose.position(i));
  }
  return row;
}

Pose pose_from_row(const std::vector<double>& row, std::size_t offset) {
  if (row.size() < offset + 12) {
    throw std::runtime_error("pose row needs 12 values");
  }
  Pose pose;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      pose.rotation(i, j) = row[offset + static_cast<std::size_t>(3 * i + j)];
    }
  }
  for (int i = 0; i < 3; ++i) {
    pose.position(i) = row[offset + 9 + static_cast<std::size_t>(i)];
  }
  return pose;
}

std::string pose_json(const Pose& pose) {
  const auto row = pose_row(pose);
  return json{{"rotation", std::vector<double>(row.begin(), row.begin() + 9)},
              {"position", std::vector<double>(row.begin() + 9, row.end())}}
      .dump(2);
}

std::string displacement_json(const Displacement& rho) {
  return json{{"rho", vector_json(rho)}}.dump(2);
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  CsvTable t;
  t.header = {"t"};
  for (const char* prefix : {"rho_d_", "rho_m_", "rho_cmd_", "rho_plant_"}) {
    const auto cols = numbered(prefix, trace.n);
    t.header.insert(t.header.end(), cols.begin(), cols.end());
  }
  for (std::size_t k = 0; k < trace.time.size(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    std::vector<double> row{trace.time[k]};
    for (const Eigen::MatrixXd* m :
         {&trace.rho_desired, &trace.rho_measured, &trace.rho_command, &trace.rho_plant}) {
      for (int i = 0; i < trace.n; ++i) {
        row.push_back((*m)(i, c));
      }
    }
    t.rows.push_back(std::move(row));
  }
  write_csv(out, t);
}

std::string trace_json(const SimTrace& trace) {
  // Each field is stored time-major: one array of n values per tick.
  return json{{"n", trace.n},
              {"t", trace.time},
              {"rho_d", matrix_rows(trace.rho_desired.transpose())},
              {"rho_m", matrix_rows(trace.rho_measured.transpose())},
              {"rho_cmd", matrix_rows(trace.rho_command.transpose())},
              {"rho_plant", matrix_rows(trace.rho_plant.transpose())}}
      .dump();
}

std::string simulation_summary_json(const SimulationSummary& summary, std::uint64_t seed) {
  return json{{"seed", seed},
              {"ticks", summary.ticks},
              {"rms_closed_loop", summary.rms_closed_loop},
              {"rms_open_loop", summary.rms_open_loop},
              {"closed_loop_better", summary.rms_closed_loop < summary.rms_open_loop},
              {"max_command_sum", summary.max_command_sum}}
      .dump(2);
}

std::string noise_report_json(const NoiseReport& report) {
  return json{{"n", report.n},
              {"joint", report.joint + 1},
              {"sigma", report.sigma},
              {"spread", vector_json(report.spread)},
              {"expected_cosine_pattern", vector_json(report.expected)},
              {"peak", report.peak},
              {"squared_norm", report.squared_norm},
              {"ratio", report.ratio},
              {"ratio_expected", 2.0 / report.n},
              {"unscaled_one_hot_ratio", report.unscaled_ratio},
              {"idempotence_residual", report.idempotence_residual}}
      .dump(2);
}

}  // namespace clarke::io

#include "cli.hpp"

#include "config_file.hpp"

#include "clarke/arc_space.hpp"
#include "clarke/clarke_core.hpp"
#include "clarke/control_sim.hpp"
#include "clarke/errors.hpp"
#include "clarke/io.hpp"
#include "clarke/kinematics.hpp"
#include "clarke/sampling.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

namespace clarke::cli {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Common {
  int n = 3;
  double d = 0.01;
  double l = 0.1;
  std::uint64_t seed = kDefaultSeed;
  std::string format;
  std::string out;
  std::string config;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--n", c.n, "number of displacement joints")->capture_default_str();
  sub->add_option("--d", c.d, "joint distance from the centerline [m]")->capture_default_str();
  sub->add_option("--l", c.l, "segment length [m]")->capture_default_str();
  c.seed_opt = sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", c.out, "output file (default: stdout)");
  sub->add_option("--config", c.config, "key = value config file; flags override it");
}

// Writes to --out when given, otherwise to the fallback stream.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) {
        throw UsageError("cannot open output file '" + path + "'");
      }
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  bool to_file() const { return file_.is_open(); }

private:
  std::ofstream file_;
  std::ostream* os_;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(' ');
    const auto e = cell.find_last_not_of(' ');
    const std::string v = b == std::string::npos ? std::string() : cell.substr(b, e - b + 1);
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
      throw UsageError(flag + ": '" + v + "' is not a number");
    }
    out.push_back(x);
  }
  if (out.empty()) {
    throw UsageError(flag + ": expected a comma-separated list of numbers");
  }
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

io::CsvTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open input file '" + path + "'");
  }
  try {
    return io::read_csv(in);
  } catch (const std::runtime_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

bool has_column(const io::CsvTable& t, const std::string& name) {
  return std::find(t.header.begin(), t.header.end(), name) != t.header.end();
}

std::vector<double> select(const io::CsvTable& t, const std::vector<double>& row,
                           const std::vector<std::string>& names) {
  std::vector<double> out;
  for (const auto& name : names) {
    try {
      out.push_back(row[t.column(name)]);
    } catch (const std::out_of_range& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

std::vector<std::string> rho_header(int n) {
  std::vector<std::string> h;
  for (int i = 1; i <= n; ++i) {
    h.push_back("rho_" + std::to_string(i));
  }
  return h;
}

void announce_seed(const Common& c, std::ostream& err) {
  if (c.seed_opt->count() == 0) {
    err << "seed: " << c.seed << " (default)\n";
  }
}

// -- matrix -------------------------------------------------------------------

struct MatrixCmd {
  Common common;
};

std::string fmt15(double x) { return io::format_double(x, 15); }

void run_matrix(const MatrixCmd& cmd, std::ostream& out) {
  const ClarkeTransform t(cmd.common.n);
  Sink sink(cmd.common.out, out);
  auto& os = sink.stream();
  const auto print_rows = [&](const Eigen::MatrixXd& m, bool as_json) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (as_json) {
        os << (i ? ",\n    [" : "    [");
      }
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        os << (j ? "," : "") << fmt15(m(i, j));
      }
      os << (as_json ? "]" : "\n");
    }
  };
  if (cmd.common.format == "json") {
    os << "{\n  \"n\": " << t.n() << ",\n  \"forward\": [\n";
    print_rows(t.forward(), true);
    os << "\n  ],\n  \"inverse\": [\n";
    print_rows(t.inverse(), true);
    os << "\n  ]\n}\n";
  } else {
    os << "# forward 2x" << t.n() << "\n";
    print_rows(t.forward(), false);
    os << "# inverse " << t.n() << "x2\n";
    print_rows(t.inverse(), false);
  }
}

// -- transform ----------------------------------------------------------------

struct TransformCmd {
  Common common;
  std::string rho;
  double re = 0.0;
  double im = 0.0;
  std::string in;
  CLI::Option* re_opt = nullptr;
  CLI::Option* im_opt = nullptr;
};

void run_transform(const TransformCmd& cmd, std::ostream& out) {
  const Common& c = cmd.common;
  const ClarkeTransform t(c.n);
  const bool have_xi = cmd.re_opt->count() > 0 || cmd.im_opt->count() > 0;
  const int modes = (!cmd.rho.empty()) + have_xi + (!cmd.in.empty());
  if (modes != 1) {
    throw UsageError("transform needs exactly one of --rho, --re/--im or --in");
  }
  io::CsvTable result;
  if (!cmd.in.empty()) {
    const io::CsvTable table = read_table(cmd.in);
    if (has_column(table, "re") && has_column(table, "im")) {
      result.header = rho_header(c.n);
      for (const auto& row : table.rows) {
        const auto xi = select(table, row, {"re", "im"});
        const Displacement rho = t.inverse_transform({xi[0], xi[1]});
        result.rows.emplace_back(rho.data(), rho.data() + rho.size());
      }
    } else {
      result.header = {"re", "im", "amplitude", "angle"};
      for (const auto& row : table.rows) {
        const auto rho = to_vector(select(table, row, rho_header(c.n)));
        const ClarkeCoordinates xi = t.transform(rho);
        const Polar p = rectangular_to_polar(xi);
        result.rows.push_back({xi.re, xi.im, p.amplitude, p.angle});
      }
    }
  } else if (have_xi) {
    const Displacement rho = t.inverse_transform({cmd.re, cmd.im});
    result.header = rho_header(c.n);
    result.rows.emplace_back(rho.data(), rho.data() + rho.size());
  } else {
    const ClarkeCoordinates xi = t.transform(to_vector(parse_list(cmd.rho, "--rho")));
    const Polar p = rectangular_to_polar(xi);
    result.header = {"re", "im", "amplitude", "angle"};
    result.rows.push_back({xi.re, xi.im, p.amplitude, p.angle});
  }

  Sink sink(c.out, out);
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& row : result.rows) {
      json obj;
      for (std::size_t i = 0; i < row.size(); ++i) {
        obj[result.header[i]] = row[i];
      }
      rows.push_back(obj);
    }
    sink.stream() << (rows.size() == 1 ? rows[0] : rows).dump(2) << "\n";
  } else {
    io::write_csv(sink.stream(), result);
  }
}

// -- fk -------------------------------------------------------------------------

struct FkCmd {
  Common common;
  std::string rho;
  std::string in;
  double epsilon = Regularization{}.epsilon;
};

void run_fk(const FkCmd& cmd, std::ostream& out) {
  const Common& c = cmd.common;
  const SegmentGeometry geom(JointLayout(c.n, c.d), c.l);
  const Regularization reg{cmd.epsilon};
  if (!(reg.epsilon > 0.0)) {
    throw DomainError("--epsilon must be positive");
  }
  if (cmd.rho.empty() == cmd.in.empty()) {
    throw UsageError("fk needs exactly one of --rho or --in");
  }
  Sink sink(c.out, out);
  if (!cmd.in.empty()) {
    const io::CsvTable table = read_table(cmd.in);
    io::CsvTable result;
    result.header = io::pose_header();
    for (const auto& row : table.rows) {
      const auto rho = to_vector(select(table, row, rho_header(c.n)));
      result.rows.push_back(io::pose_row(forward_kinematics(geom, rho, reg)));
    }
    io::write_csv(sink.stream(), result);
    return;
  }
  const auto values = parse_list(cmd.rho, "--rho");
  const Pose pose = forward_kinematics(geom, to_vector(values), reg);
  if (c.format == "json") {
    sink.stream() << io::pose_json(pose) << "\n";
  } else {
    io::write_csv(sink.stream(), io::CsvTable{io::pose_header(), {io::pose_row(pose)}});
  }
}

// -- ik -------------------------------------------------------------------------

struct IkCmd {
  Common common;
  std::string position;
  std::string rotation;
  std::string pose;
  std::string in;
  std::string mode = "auto";
};

Displacement solve_ik(const SegmentGeometry& geom, const std::string& mode,
                      const std::vector<double>& values) {
  if (mode == "position") {
    return ik_position(geom, Position(values[0], values[1], values[2]));
  }
  Pose pose = io::pose_from_row(mode == "pose" ? values : [&] {
    std::vector<double> padded = values;
    padded.resize(12, 0.0);
    return padded;
  }());
  if (mode == "rotation") {
    return ik_rotation(geom, pose.rotation);
  }
  return ik_pose(geom, pose);
}

void run_ik(const IkCmd& cmd, std::ostream& out) {
  const Common& c = cmd.common;
  const SegmentGeometry geom(JointLayout(c.n, c.d), c.l);
  const int given = (!cmd.position.empty()) + (!cmd.rotation.empty()) + (!cmd.pose.empty()) +
                    (!cmd.in.empty());
  if (given != 1) {
    throw UsageError("ik needs exactly one of --position, --rotation, --pose or --in");
  }
  Sink sink(c.out, out);
  if (!cmd.in.empty()) {
    const io::CsvTable table = read_table(cmd.in);
    std::string mode = cmd.mode;
    if (mode == "auto") {
      mode = has_column(table, "r11") ? (has_column(table, "px") ? "pose" : "rotation") : "position";
    }
    const auto header = io::pose_header();
    const std::vector<std::string> cols =
        mode == "position" ? std::vector<std::string>(header.begin() + 9, header.end())
        : mode == "rotation" ? std::vector<std::string>(header.begin(), header.begin() + 9)
                             : header;
    io::CsvTable result;
    result.header = rho_header(c.n);
    for (const auto& row : table.rows) {
      const Displacement rho = solve_ik(geom, mode, select(table, row, cols));
      result.rows.emplace_back(rho.data(), rho.data() + rho.size());
    }
    io::write_csv(sink.stream(), result);
    return;
  }
  std::string mode;
  std::vector<double> values;
  if (!cmd.position.empty()) {
    mode = "position";
    values = parse_list(cmd.position, "--position");
  } else if (!cmd.rotation.empty()) {
    mode = "rotation";
    values = parse_list(cmd.rotation, "--rotation");
  } else {
    mode = "pose";
    values = parse_list(cmd.pose, "--pose");
  }
  const std::size_t expected = mode == "position" ? 3 : mode == "rotation" ? 9 : 12;
  if (values.size() != expected) {
    throw UsageError("--" + mode + " expects " + std::to_string(expected) + " values, got " +
                     std::to_string(values.size()));
  }
  const Displacement rho = solve_ik(geom, mode, values);
  if (c.format == "json") {
    sink.stream() << io::displacement_json(rho) << "\n";
  } else {
    io::write_csv(sink.stream(),
                  io::CsvTable{rho_header(c.n), {std::vector<double>(rho.data(), rho.data() + rho.size())}});
  }
}

// -- sample ---------------------------------------------------------------------

struct SampleCmd {
  Common common;
  std::string method = "d";
  std::size_t k = 1000;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double rounding_epsilon = 1e-5;
  std::uint64_t iteration_cap = 100'000'000;
  bool batched = false;
  std::string stats;
  CLI::Option* rho_min_opt = nullptr;
  CLI::Option* rho_max_opt = nullptr;
};

std::vector<SamplingMethod> parse_methods(const std::string& text) {
  std::vector<SamplingMethod> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(parse_method(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("method: ") + e.what());
    }
  }
  if (out.empty()) {
    throw UsageError("--methods: expected a comma-separated list such as a,b,c,d,e");
  }
  return out;
}

SamplerConfig sampler_config(const Common& c, double rho_min, double rho_max, bool min_given,
                             bool max_given, double rounding_epsilon) {
  SamplerConfig cfg{JointLayout(c.n, c.d), min_given ? rho_min : -c.d * kPi,
                    max_given ? rho_max : c.d * kPi, rounding_epsilon, c.seed};
  return cfg;
}

void run_sample(const SampleCmd& cmd, std::ostream& out, std::ostream& err) {
  const Common& c = cmd.common;
  announce_seed(c, err);
  const SamplingMethod method = parse_methods(cmd.method).at(0);
  SamplerConfig cfg = sampler_config(c, cmd.rho_min, cmd.rho_max, cmd.rho_min_opt->count() > 0,
                                     cmd.rho_max_opt->count() > 0, cmd.rounding_epsilon);
  cfg.iteration_cap = cmd.iteration_cap;
  if (cmd.batched && !is_direct(method)) {
    throw UsageError("--batched applies to the direct methods c, d, e only");
  }
  const SamplingResult r =
      cmd.batched ? sample_direct_batched_timed(cfg, cmd.k, radial_profile(method)) : sample(cfg, cmd.k, method);

  Sink sink(c.out, out);
  if (c.format == "json") {
    json samples = json::array();
    for (Eigen::Index k = 0; k < r.batch.columns.cols(); ++k) {
      samples.push_back(std::vector<double>(r.batch.columns.col(k).data(),
                                            r.batch.columns.col(k).data() + r.batch.columns.rows()));
    }
    json doc = json::parse(io::sampling_stats_json(r.stats, cmd.k, c.seed));
    doc["samples"] = samples;
    sink.stream() << doc.dump(2) << "\n";
  } else {
    io::write_samples_csv(sink.stream(), r.batch.columns);
  }
  if (!cmd.stats.empty()) {
    Sink stats(cmd.stats, out);
    stats.stream() << io::sampling_stats_json(r.stats, cmd.k, c.seed) << "\n";
  }
}

// -- bench ----------------------------------------------------------------------

struct BenchCmd {
  Common common;
  std::string methods = "a,b,c,d,e";
  std::size_t k = 1000;
  int runs = 5;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double annulus_inner = 0.0;
  double rounding_epsilon = 1e-5;
  std::size_t bins = 50;
  bool no_vectorized = false;
  std::string json_path;
  std::string hist_dir;
  CLI::Option* rho_min_opt = nullptr;
  CLI::Option* rho_max_opt = nullptr;
  CLI::Option* inner_opt = nullptr;
};

void run_bench(const BenchCmd& cmd, std::ostream& out, std::ostream& err) {
  const Common& c = cmd.common;
  announce_seed(c, err);
  BenchmarkConfig cfg{sampler_config(c, cmd.rho_min, cmd.rho_max, cmd.rho_min_opt->count() > 0,
                                     cmd.rho_max_opt->count() > 0, cmd.rounding_epsilon),
                      0.0, cmd.k, cmd.runs, parse_methods(cmd.methods), !cmd.no_vectorized,
                      cmd.bins};
  cfg.annulus_inner = cmd.inner_opt->count() > 0 ? cmd.annulus_inner : 0.5 * cfg.sampler.rho_max;
  const BenchmarkReport report = benchmark(cfg);

  Sink sink(c.out, out);
  if (c.format == "json") {
    sink.stream() << io::benchmark_json(report, cfg) << "\n";
  } else {
    io::write_stats_csv(sink.stream(), report);
  }
  if (!cmd.json_path.empty()) {
    Sink js(cmd.json_path, out);
    js.stream() << io::benchmark_json(report, cfg) << "\n";
  }
  if (!cmd.hist_dir.empty()) {
    std::filesystem::create_directories(cmd.hist_dir);
    for (const auto& m : report.methods) {
      for (std::size_t j = 0; j < m.joint_histograms.size(); ++j) {
        const auto path = std::filesystem::path(cmd.hist_dir) /
                          ("hist_" + m.label + "_rho_" + std::to_string(j + 1) + ".csv");
        Sink h(path.string(), out);
        io::write_histogram_csv(h.stream(), m.joint_histograms[j]);
      }
    }
  }

  std::ostream& table = sink.to_file() ? out : err;
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %13s %13s %8s %14s %14s %12s\n", "method", "time_s mean",
                "time_s std", "factor", "iter mean", "iter std", "success");
  table << line;
  for (const auto& m : report.methods) {
    std::snprintf(line, sizeof line, "%-6s %13.6g %13.6g %8.3f %14.6g %14.6g %12.6g\n",
                  m.label.c_str(), m.time_mean, m.time_std, m.factor, m.iterations_mean,
                  m.iterations_std, m.success_rate);
    table << line;
  }
}

// -- simulate -------------------------------------------------------------------

struct SimulateCmd {
  Common common;
  double kp = 125.0;
  double dt = 1e-3;
  double tau = 0.25;
  double noise = 2.5e-3;
  double bias = 0.0;
  double resolution = 0.0;
  double v_max = 0.01 * kPi;
  double a_max = 0.1 * kPi;
  double d_max = 0.1 * kPi;
  double hold = 0.0;
  int waypoints = 5;
  double inner_radius = 0.0;
  double max_radius = 0.0;
  std::string waypoint_list;
  bool pure_p = false;
  std::string summary;
  std::string open_loop_out;
  CLI::Option* inner_opt = nullptr;
  CLI::Option* max_opt = nullptr;
};

std::vector<ClarkeCoordinates> parse_waypoints(const std::string& text) {
  std::vector<ClarkeCoordinates> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto v = parse_list(item, "--waypoint-list");
    if (v.size() != 2) {
      throw UsageError("--waypoint-list: each waypoint is 're,im', separated by ';'");
    }
    out.push_back({v[0], v[1]});
  }
  return out;
}

void run_simulate(const SimulateCmd& cmd, std::ostream& out, std::ostream& err) {
  const Common& c = cmd.common;
  announce_seed(c, err);
  const SegmentGeometry geom(JointLayout(c.n, c.d), c.l);
  const ControllerConfig cfg{geom, cmd.kp, cmd.dt, !cmd.pure_p};
  cfg.validate();
  const double max_radius = cmd.max_opt->count() > 0 ? cmd.max_radius : c.d * kPi;
  const double inner = cmd.inner_opt->count() > 0 ? cmd.inner_radius : 0.5 * max_radius;

  TrajectorySpec spec;
  spec.v_max = cmd.v_max;
  spec.a_max = cmd.a_max;
  spec.d_max = cmd.d_max;
  spec.hold = cmd.hold;
  spec.waypoints = cmd.waypoint_list.empty()
                       ? sample_waypoints(geom.layout(), static_cast<std::size_t>(std::max(cmd.waypoints, 0)),
                                          inner, max_radius, derive_seed(c.seed, 1))
                       : parse_waypoints(cmd.waypoint_list);
  const ClarkeTrajectory traj = generate_clarke_trajectory(spec, cmd.dt);
  const NoiseModel noise{cmd.noise, derive_seed(c.seed, 2), cmd.bias, cmd.resolution};
  const ComparisonRun run = compare_loops(cfg, cmd.tau, noise, traj);

  Sink sink(c.out, out);
  if (c.format == "json") {
    sink.stream() << io::trace_json(run.closed_loop) << "\n";
  } else {
    io::write_trace_csv(sink.stream(), run.closed_loop);
  }
  if (!cmd.open_loop_out.empty()) {
    Sink ol(cmd.open_loop_out, out);
    if (c.format == "json") {
      ol.stream() << io::trace_json(run.open_loop) << "\n";
    } else {
      io::write_trace_csv(ol.stream(), run.open_loop);
    }
  }
  const std::string summary = io::simulation_summary_json(run.summary, c.seed);
  if (!cmd.summary.empty()) {
    Sink s(cmd.summary, out);
    s.stream() << summary << "\n";
  } else {
    (sink.to_file() ? out : err) << summary << "\n";
  }
}

// -- noise-report ---------------------------------------------------------------

struct NoiseCmd {
  Common common;
  double sigma = 1.0;
  int joint = 1;
};

void run_noise(const NoiseCmd& cmd, std::ostream& out) {
  const Common& c = cmd.common;
  const JointLayout layout(c.n, c.d);
  const NoiseReport r = noise_propagation(layout, cmd.sigma, cmd.joint - 1);
  Sink sink(c.out, out);
  if (c.format == "json") {
    sink.stream() << io::noise_report_json(r) << "\n";
  } else {
    io::CsvTable t;
    t.header = {"joint", "psi", "spread", "expected"};
    for (int i = 0; i < r.n; ++i) {
      t.rows.push_back({static_cast<double>(i + 1), layout.psi(i), r.spread(i), r.expected(i)});
    }
    io::write_csv(sink.stream(), t);
  }
}

// -- dispatch -------------------------------------------------------------------

std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) {
      return args[i].substr(9);
    }
  }
  return {};
}

// Config values go right after the subcommand name so that command-line flags,
// which come later, take precedence.
std::vector<std::string> inject_config(CLI::App& app, std::vector<std::string> args) {
  const std::string path = find_config_path(args);
  if (path.empty()) {
    return args;
  }
  std::size_t pos = 0;
  CLI::App* sub = nullptr;
  for (; pos < args.size(); ++pos) {
    if (!args[pos].empty() && args[pos][0] != '-') {
      sub = app.get_subcommand_no_throw(args[pos]);
      break;
    }
  }
  if (sub == nullptr) {
    return args;
  }
  std::vector<std::string> injected;
  for (const auto& entry : read_config_file(path)) {
    if (entry.key == "config") {
      throw ConfigError(path, entry.line, "nested config files are not supported");
    }
    if (sub->get_option_no_throw("--" + entry.key) == nullptr) {
      throw ConfigError(path, entry.line,
                        "unknown key '" + entry.key + "' for subcommand '" + sub->get_name() + "'");
    }
    injected.push_back("--" + entry.key + "=" + entry.value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos) + 1, injected.begin(), injected.end());
  return args;
}

int run_impl(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Clarke transform toolkit for continuum robots", "clarke"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto matrix = std::make_unique<MatrixCmd>();
  auto transform = std::make_unique<TransformCmd>();
  auto fk = std::make_unique<FkCmd>();
  auto ik = std::make_unique<IkCmd>();
  auto smp = std::make_unique<SampleCmd>();
  auto bench = std::make_unique<BenchCmd>();
  auto sim = std::make_unique<SimulateCmd>();
  auto noise = std::make_unique<NoiseCmd>();
  std::function<void()> action;

  auto* s_matrix = app.add_subcommand("matrix", "print the forward matrix and its right-inverse");
  add_common(s_matrix, matrix->common, "csv");
  s_matrix->callback([&] { action = [&] { run_matrix(*matrix, out); }; });

  auto* s_transform = app.add_subcommand("transform", "joint displacements <-> Clarke coordinates");
  add_common(s_transform, transform->common, "csv");
  s_transform->add_option("--rho", transform->rho, "displacements rho_1,...,rho_n [m]");
  transform->re_opt = s_transform->add_option("--re", transform->re, "Clarke real part [m]");
  transform->im_opt = s_transform->add_option("--im", transform->im, "Clarke imaginary part [m]");
  s_transform->add_option("--in", transform->in, "CSV with rho_* or re,im columns");
  s_transform->callback([&] { action = [&] { run_transform(*transform, out); }; });

  auto* s_fk = app.add_subcommand("fk", "forward kinematics from joint displacements");
  add_common(s_fk, fk->common, "json");
  s_fk->add_option("--rho", fk->rho, "displacements rho_1,...,rho_n [m]");
  s_fk->add_option("--in", fk->in, "CSV with rho_1..rho_n columns; writes pose rows");
  s_fk->add_option("--epsilon", fk->epsilon, "norm regularization [m]")->capture_default_str();
  s_fk->callback([&] { action = [&] { run_fk(*fk, out); }; });

  auto* s_ik = app.add_subcommand("ik", "inverse kinematics to joint displacements");
  add_common(s_ik, ik->common, "json");
  s_ik->add_option("--position", ik->position, "tip position px,py,pz [m]");
  s_ik->add_option("--rotation", ik->rotation, "tip rotation r11,...,r33 (row-major)");
  s_ik->add_option("--pose", ik->pose, "rotation row-major then position (12 values)");
  s_ik->add_option("--in", ik->in, "CSV with pose columns r11..r33,px,py,pz");
  s_ik->add_option("--mode", ik->mode, "which part of the CSV to invert")
      ->check(CLI::IsMember({"auto", "position", "rotation", "pose"}))
      ->capture_default_str();
  s_ik->callback([&] { action = [&] { run_ik(*ik, out); }; });

  auto* s_sample = app.add_subcommand("sample", "draw joint-space samples");
  smp->common.d = 1e-3;
  add_common(s_sample, smp->common, "csv");
  s_sample->add_option("--method", smp->method, "a, b, c, d or e")->capture_default_str();
  s_sample->add_option("--k", smp->k, "number of samples")->capture_default_str();
  smp->rho_min_opt = s_sample->add_option("--rho-min", smp->rho_min, "lower bound [m] (default -d pi)");
  smp->rho_max_opt = s_sample->add_option("--rho-max", smp->rho_max, "upper bound [m] (default d pi)");
  s_sample->add_option("--rounding-epsilon", smp->rounding_epsilon, "method a granularity [m]")
      ->capture_default_str();
  s_sample->add_option("--iteration-cap", smp->iteration_cap, "rejection attempt limit")
      ->capture_default_str();
  s_sample->add_flag("--batched", smp->batched, "stacked single-product form (c, d, e)");
  s_sample->add_option("--stats", smp->stats, "write sampling statistics JSON here");
  s_sample->callback([&] { action = [&] { run_sample(*smp, out, err); }; });

  auto* s_bench = app.add_subcommand("bench", "Monte-Carlo sampling benchmark");
  bench->common.d = 1e-3;
  add_common(s_bench, bench->common, "csv");
  s_bench->add_option("--methods", bench->methods, "comma-separated methods")->capture_default_str();
  s_bench->add_option("--k", bench->k, "samples per run")->capture_default_str();
  s_bench->add_option("--runs", bench->runs, "runs per method")->capture_default_str();
  bench->rho_min_opt = s_bench->add_option("--rho-min", bench->rho_min, "lower bound [m] (default -d pi)");
  bench->rho_max_opt = s_bench->add_option("--rho-max", bench->rho_max, "upper bound [m] (default d pi)");
  bench->inner_opt = s_bench->add_option("--annulus-inner", bench->annulus_inner,
                                         "inner radius for e [m] (default rho_max / 2)");
  s_bench->add_option("--rounding-epsilon", bench->rounding_epsilon, "method a granularity [m]")
      ->capture_default_str();
  s_bench->add_option("--bins", bench->bins, "histogram bins")->capture_default_str();
  s_bench->add_flag("--no-vectorized", bench->no_vectorized, "skip the batched rows");
  s_bench->add_option("--json", bench->json_path, "also write the full report (with std) as JSON");
  s_bench->add_option("--hist-dir", bench->hist_dir, "write per-joint histogram CSVs here");
  s_bench->callback([&] { action = [&] { run_bench(*bench, out, err); }; });

  auto* s_sim = app.add_subcommand("simulate", "closed-loop displacement control simulation");
  sim->common.n = 5;
  add_common(s_sim, sim->common, "csv");
  s_sim->add_option("--kp", sim->kp, "proportional gain")->capture_default_str();
  s_sim->add_option("--dt", sim->dt, "sample time [s]")->capture_default_str();
  s_sim->add_option("--tau", sim->tau, "actuator time constant [s]")->capture_default_str();
  s_sim->add_option("--noise", sim->noise, "uniform measurement noise half-width [m]")->capture_default_str();
  s_sim->add_option("--bias", sim->bias, "constant measurement bias [m]")->capture_default_str();
  s_sim->add_option("--resolution", sim->resolution, "sensor resolution [m], 0 = none")->capture_default_str();
  s_sim->add_option("--v-max", sim->v_max, "velocity limit [m/s]")->capture_default_str();
  s_sim->add_option("--a-max", sim->a_max, "acceleration limit [m/s^2]")->capture_default_str();
  s_sim->add_option("--d-max", sim->d_max, "deceleration limit [m/s^2]")->capture_default_str();
  s_sim->add_option("--hold", sim->hold, "dwell at the goal [s]")->capture_default_str();
  s_sim->add_option("--waypoints", sim->waypoints, "number of sampled waypoints incl. start")
      ->capture_default_str();
  sim->inner_opt = s_sim->add_option("--inner-radius", sim->inner_radius,
                                     "waypoint annulus inner radius [m] (default max / 2)");
  sim->max_opt = s_sim->add_option("--max-radius", sim->max_radius,
                                   "waypoint annulus outer radius [m] (default d pi)");
  s_sim->add_option("--waypoint-list", sim->waypoint_list, "explicit waypoints 're,im;re,im;...'");
  s_sim->add_flag("--pure-p", sim->pure_p, "disable reference feedforward");
  s_sim->add_option("--summary", sim->summary, "write the RMS summary JSON here");
  s_sim->add_option("--open-loop-out", sim->open_loop_out, "also write the open-loop trace");
  s_sim->callback([&] { action = [&] { run_simulate(*sim, out, err); }; });

  auto* s_noise = app.add_subcommand("noise-report", "spread of a single-joint disturbance");
  add_common(s_noise, noise->common, "json");
  s_noise->add_option("--sigma", noise->sigma, "disturbance magnitude [m]")->capture_default_str();
  s_noise->add_option("--joint", noise->joint, "disturbed joint, 1-based")->capture_default_str();
  s_noise->callback([&] { action = [&] { run_noise(*noise, out); }; });

  try {
    args = inject_config(app, std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (action) {
      action();
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // Dimension mismatches, unsupported methods and bad method letters.
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const IterationCapError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run_impl(args, out, err);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run_impl(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace clarke::cli

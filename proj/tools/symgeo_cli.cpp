#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symgeo/classical.hpp"
#include "symgeo/extremal.hpp"
#include "symgeo/geometric_measure.hpp"
#include "symgeo/io.hpp"
#include "symgeo/majorana.hpp"

namespace fs = std::filesystem;
using namespace symgeo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitUsage = 2;

/// Usage or input problems; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSize {
  int cols = 0;
  int rows = 0;
};

GridSize parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw UsageError("--grid expects WxH, got '" + text + "'");
  try {
    std::size_t used = 0;
    GridSize g;
    g.cols = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("");
    const std::string h = text.substr(x + 1);
    g.rows = std::stoi(h, &used);
    if (used != h.size()) throw std::invalid_argument("");
    if (g.cols < 1 || g.rows < 2) throw UsageError("--grid needs W >= 1 and H >= 2");
    return g;
  } catch (const std::logic_error&) {
    throw UsageError("--grid expects WxH, got '" + text + "'");
  }
}

std::vector<int> parse_support(const std::string& text) {
  std::vector<int> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
      throw UsageError("--support expects comma-separated integers, got '" + text + "'");
    }
  }
  return out;
}

std::string fixed9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

struct Common {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
  std::string format = "json";

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("MAJ_SEED")) {
      try {
        return std::stoull(env);
      } catch (const std::logic_error&) {
        throw UsageError(std::string("MAJ_SEED is not an unsigned integer: ") + env);
      }
    }
    return 1;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed (falls back to MAJ_SEED, then 1)");
  cmd->add_option("--threads", c.threads, "Worker threads; 0 uses all cores")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out, "Directory for output files");
  cmd->add_option("--format", c.format, "Stdout format")->check(CLI::IsMember({"json", "csv"}));
}

/// Output directory bookkeeping plus the run manifest.
class Outputs {
 public:
  Outputs(std::string command, const std::string& dir) : command_(std::move(command)) {
    if (dir.empty()) return;
    dir_ = dir;
    std::error_code ec;
    fs::create_directories(*dir_, ec);
    if (ec) throw UsageError("cannot create output directory " + dir + ": " + ec.message());
  }

  bool enabled() const { return dir_.has_value(); }

  void write(const std::string& name, const std::string& content) {
    if (!dir_) return;
    write_text(*dir_ / name, content);
    files_.push_back(name);
  }

  void finish(const json& config, std::uint64_t seed, const std::vector<std::string>& inputs) {
    if (!dir_) return;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m = {{"command", command_},
              {"config", config},
              {"seed", seed},
              {"tool_version", SYMGEO_VERSION},
              {"inputs", inputs},
              {"outputs", files_},
              {"wall_seconds", round_output(seconds)}};
    write_text(*dir_ / "manifest.json", m.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::optional<fs::path> dir_;
  std::vector<std::string> files_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<SpherePoint> mp_list(const SymmetricState& s) { return state_to_points(s).points; }

int cmd_analyze(const std::string& path, const Common& c, const std::string& grid_flag) {
  SymmetricState state;
  try {
    state = load_state(path);
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }
  Outputs out("analyze", c.out);
  const CppAnalysis a = find_cpps(state);
  const std::vector<SpherePoint> mps = mp_list(state);

  json report = {{"n", state.n()},
                 {"input_norm", round_output(state.correction())},
                 {"state", state_to_json(state)},
                 {"symmetry", symmetry_to_json(classify(state))},
                 {"majorana_points", json::array()},
                 {"analysis", analysis_to_json(a)},
                 {"bounds", bounds_to_json(bounds(state.n()))}};
  for (const auto& p : mps) report["majorana_points"].push_back(point_to_json(p));

  out.write("analysis.json", report.dump(2) + "\n");
  out.write("majorana_points.csv", points_csv(mps));
  out.write("cpps.csv", points_csv(a.cpps));
  json config = {{"state_file", path}, {"grid", grid_flag}};
  if (!grid_flag.empty()) {
    const GridSize g = parse_grid(grid_flag);
    const std::string csv = grid_csv(grid_scan(state, g.rows, g.cols));
    if (out.enabled()) {
      out.write("grid.csv", csv);
    } else if (c.format == "csv") {
      std::cout << csv;
    }
  }
  out.finish(config, 0, {path});

  if (c.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else if (grid_flag.empty() || out.enabled()) {
    std::cout << points_csv(a.cpps);
  }
  std::cerr << "E_G = " << fixed9(a.e_g) << "  CPPs: "
            << (a.is_ring() ? "ring at theta = " + fixed9(*a.ring_theta) : std::to_string(a.cpp_count())) << "\n";
  return kExitOk;
}

int cmd_maximize(int n, const std::string& ansatz_name, const std::string& support, int restarts,
                 const std::string& grid_flag, const Common& c) {
  if (n < 2 || n > 16) throw UsageError("--n must lie in [2, 16]");
  SearchConfig cfg;
  try {
    cfg.ansatz = parse_ansatz(ansatz_name, parse_support(support));
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  cfg.seed = c.resolved_seed();
  cfg.restarts = restarts;
  cfg.threads = c.threads;
  if (!grid_flag.empty()) {
    const GridSize g = parse_grid(grid_flag);
    cfg.grid_rows = g.rows;
    cfg.grid_cols = g.cols;
  }
  Outputs out("maximize", c.out);
  const ExtremalResult r = maximize_entanglement(n, cfg);
  const json bundle = result_bundle(r, cfg);

  out.write("result.json", bundle.dump(2) + "\n");
  out.write("majorana_points.csv", points_csv(mp_list(r.state)));
  out.write("cpps.csv", points_csv(r.analysis.cpps));
  json config = search_config_to_json(cfg);
  config["n"] = n;
  out.finish(config, cfg.seed, {});

  if (c.format == "json") {
    std::cout << bundle.dump(2) << "\n";
  } else {
    std::cout << points_csv(mp_list(r.state));
  }
  std::cerr << "E_G = " << fixed9(r.analysis.e_g) << "  CPPs: " << r.analysis.cpp_count()
            << "  certificate: " << format_number(r.certificate) << (r.converged ? "" : "  (not converged)")
            << "\n";
  return r.converged ? kExitOk : kExitNotConverged;
}

int cmd_classical(const std::string& problem, int n, int restarts, bool as_state, const Common& c) {
  if (problem != "toth" && problem != "thomson") {
    throw UsageError("classical: problem must be toth or thomson, got '" + problem + "'");
  }
  if (n < 2) throw UsageError("--n must be at least 2");
  ClassicalSearchConfig cfg;
  cfg.seed = c.resolved_seed();
  cfg.restarts = restarts;
  cfg.threads = c.threads;
  Outputs out("classical " + problem, c.out);
  const ClassicalConfiguration conf = problem == "toth" ? solve_toth(n, cfg) : solve_thomson(n, cfg);

  json result = {{"problem", problem},
                 {"n", n},
                 {"toth_cost", round_output(conf.toth_cost)},
                 {"thomson_cost", round_output(conf.thomson_cost)},
                 {"converged", conf.converged}};
  if (as_state) {
    const SymmetricState s = to_symmetric_state(conf);
    const CppAnalysis a = find_cpps(s);
    result["state"] = state_to_json(s);
    result["analysis"] = analysis_to_json(a);
    std::cerr << "E_G = " << fixed9(a.e_g) << "\n";
  }
  out.write("points.csv", points_csv(conf.points));
  out.write("configuration.json", result.dump(2) + "\n");
  out.finish({{"problem", problem}, {"n", n}, {"restarts", restarts}, {"as_state", as_state}}, cfg.seed, {});

  if (c.format == "json") {
    std::cout << result.dump(2) << "\n";
  } else {
    std::cout << points_csv(conf.points);
  }
  std::cerr << (problem == "toth" ? "min distance = " + format_number(conf.toth_cost)
                                  : "energy = " + format_number(conf.thomson_cost))
            << "\n";
  return conf.converged ? kExitOk : kExitNotConverged;
}

int cmd_bounds(int n_max, int restarts, const Common& c) {
  if (n_max < 2 || n_max > 16) throw UsageError("--n-max must lie in [2, 16]");
  ClassicalSearchConfig cfg;
  cfg.seed = c.resolved_seed();
  cfg.restarts = restarts;
  cfg.threads = c.threads;
  Outputs out("bounds", c.out);
  const std::vector<CurveRow> rows = lower_bound_curve(n_max, cfg);
  const std::string csv = curve_csv(rows);
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"n", r.n},
                     {"toth_eg", round_output(r.toth_eg)},
                     {"thomson_eg", round_output(r.thomson_eg)},
                     {"dicke_lower", round_output(r.dicke_lower)},
                     {"upper", round_output(r.upper)}});
  }
  out.write("curve.csv", csv);
  out.finish({{"n_max", n_max}, {"restarts", restarts}}, cfg.seed, {});
  if (c.format == "json") {
    std::cout << table.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric entanglement of symmetric multiqubit states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SYMGEO_VERSION);

  Common analyze_common, max_common, classical_common, bounds_common;
  std::string state_file, analyze_grid;
  auto* analyze = app.add_subcommand("analyze", "Majorana points, CPPs and E_G of a state file");
  analyze->add_option("state", state_file, "State JSON {\"n\": n, \"coeffs\": [[re, im], ...]}")->required();
  analyze->add_option("--grid", analyze_grid, "Also sample g^2 on a WxH (phi x theta) grid");
  add_common(analyze, analyze_common);

  int max_n = 0, max_restarts = 4;
  std::string ansatz = "positive", support, max_grid;
  auto* maximize = app.add_subcommand("maximize", "Search for the most entangled state");
  maximize->add_option("--n", max_n, "Number of qubits")->required();
  maximize->add_option("--ansatz", ansatz, "Search space")
      ->check(CLI::IsMember({"positive", "positive-full", "positive-sparse", "real", "complex"}));
  maximize->add_option("--support", support, "Comma-separated Dicke indices for sparse ansaetze");
  maximize->add_option("--restarts", max_restarts, "Random restarts besides the warm starts")
      ->check(CLI::NonNegativeNumber);
  maximize->add_option("--grid", max_grid, "Certificate grid WxH");
  add_common(maximize, max_common);
  max_common.format = "json";

  std::string problem;
  int cl_n = 0, cl_restarts = 24;
  bool as_state = false;
  auto* classical = app.add_subcommand("classical", "Solve Toth's or Thomson's point problem");
  classical->add_option("problem", problem, "toth or thomson")->required();
  classical->add_option("--n", cl_n, "Number of points")->required();
  classical->add_option("--restarts", cl_restarts, "Random restarts")->check(CLI::PositiveNumber);
  classical->add_flag("--as-state", as_state, "Also analyze the corresponding symmetric state");
  add_common(classical, classical_common);

  int n_max = 12, bounds_restarts = 24;
  auto* bounds_cmd = app.add_subcommand("bounds", "Classical lower-bound curve next to the analytic bounds");
  bounds_cmd->add_option("--n-max", n_max, "Largest n");
  bounds_cmd->add_option("--restarts", bounds_restarts, "Restarts per classical solve")->check(CLI::PositiveNumber);
  add_common(bounds_cmd, bounds_common);
  bounds_common.format = "csv";

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(state_file, analyze_common, analyze_grid);
    if (*maximize) return cmd_maximize(max_n, ansatz, support, max_restarts, max_grid, max_common);
    if (*classical) return cmd_classical(problem, cl_n, cl_restarts, as_state, classical_common);
    return cmd_bounds(n_max, bounds_restarts, bounds_common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << " (residual " << format_number(e.residual()) << ")\n";
    return kExitNotConverged;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotConverged;
  }
}

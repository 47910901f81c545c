#include "symgeo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace symgeo {

std::string format_number(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputDigits, x);
  return buf;
}

double round_output(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x));
}

namespace {

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw FormatError(where + ": expected a number");
  return j.get<double>();
}

json rounded_pair(double a, double b) { return json::array({round_output(a), round_output(b)}); }

void append_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ',';
    out += format_number(v);
    first = false;
  }
  out += '\n';
}

}  // namespace

SymmetricState state_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("state: expected a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw FormatError("state: missing integer field \"n\"");
  if (!j.contains("coeffs") || !j["coeffs"].is_array()) throw FormatError("state: missing array field \"coeffs\"");
  const long long n = j["n"].get<long long>();
  if (n < 1) throw FormatError("state: n must be at least 1");
  const json& c = j["coeffs"];
  if (static_cast<long long>(c.size()) != n + 1) {
    throw FormatError("state: expected " + std::to_string(n + 1) + " coefficients, got " + std::to_string(c.size()));
  }
  Eigen::VectorXcd v(n + 1);
  for (long long k = 0; k <= n; ++k) {
    const json& e = c[k];
    const std::string where = "state: coeffs[" + std::to_string(k) + "]";
    if (e.is_number()) {
      v[k] = number_at(e, where);
    } else if (e.is_array() && e.size() == 2) {
      v[k] = cplx(number_at(e[0], where), number_at(e[1], where));
    } else {
      throw FormatError(where + ": expected [re, im] or a number");
    }
  }
  try {
    return SymmetricState(std::move(v));
  } catch (const std::domain_error& e) {
    throw FormatError(std::string("state: ") + e.what());
  }
}

SymmetricState parse_state(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("state: invalid JSON: ") + e.what());
  }
  return state_from_json(j);
}

SymmetricState load_state(const std::filesystem::path& path) { return parse_state(read_text(path)); }

json state_to_json(const SymmetricState& state) {
  json coeffs = json::array();
  for (int k = 0; k <= state.n(); ++k) coeffs.push_back(rounded_pair(state[k].real(), state[k].imag()));
  return {{"n", state.n()}, {"coeffs", coeffs}};
}

json point_to_json(const SpherePoint& p) {
  const Eigen::Vector3d v = p.bloch();
  return {{"theta", round_output(p.theta())},
          {"phi", round_output(p.phi())},
          {"xyz", json::array({round_output(v.x()), round_output(v.y()), round_output(v.z())})}};
}

json analysis_to_json(const CppAnalysis& a) {
  json cpps = json::array();
  for (const auto& p : a.cpps) cpps.push_back(point_to_json(p));
  json others = json::array();
  for (const auto& m : a.local_maxima) {
    json o = point_to_json(m.point);
    o["g"] = round_output(m.g);
    others.push_back(o);
  }
  json out = {{"e_g", round_output(a.e_g)},
              {"g_max", round_output(a.g_max)},
              {"cpp_count", a.cpp_count()},
              {"cpps", cpps},
              {"other_local_maxima", others},
              {"strategy", a.strategy}};
  out["ring_theta"] = a.ring_theta ? json(round_output(*a.ring_theta)) : json(nullptr);
  out["ring_axis"] = a.ring_theta ? point_to_json(a.ring_axis) : json(nullptr);
  return out;
}

json symmetry_to_json(const SymmetryInfo& info) {
  json out = {{"rotational_order", info.rotational_order},
              {"is_real", info.is_real},
              {"is_positive", info.is_positive},
              {"positive_gauge", info.positive_gauge}};
  out["dicke_index"] = info.dicke_index ? json(*info.dicke_index) : json(nullptr);
  return out;
}

json bounds_to_json(const BoundsReport& b) {
  return {{"n", b.n},
          {"upper", round_output(b.upper)},
          {"dicke_lower", round_output(b.dicke_lower)},
          {"stirling_approx", round_output(b.stirling_approx)},
          {"general_lower", round_output(b.general_lower)}};
}

json ansatz_to_json(const Ansatz& a) { return {{"name", a.name()}, {"support", a.support}}; }

json search_config_to_json(const SearchConfig& c) {
  return {{"seed", c.seed},
          {"restarts", c.restarts},
          {"ansatz", ansatz_to_json(c.ansatz)},
          {"outer_tol", c.outer_tol},
          {"max_evaluations", c.max_evaluations},
          {"use_warm_starts", c.use_warm_starts},
          {"grid", json::array({c.grid_cols, c.grid_rows})}};
}

json result_bundle(const ExtremalResult& r, const SearchConfig& config) {
  return {{"n", r.n},
          {"state", state_to_json(r.state)},
          {"analysis", analysis_to_json(r.analysis)},
          {"e_g", round_output(r.analysis.e_g)},
          {"certificate", round_output(r.certificate)},
          {"converged", r.converged},
          {"evaluations", r.evaluations},
          {"origin", r.origin},
          {"seed", r.seed},
          {"config", search_config_to_json(config)}};
}

std::string points_csv(const std::vector<SpherePoint>& points) {
  std::string out = "index,theta,phi,x,y,z\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::Vector3d v = points[i].bloch();
    out += std::to_string(i) + ',';
    append_row(out, {points[i].theta(), points[i].phi(), v.x(), v.y(), v.z()});
  }
  return out;
}

std::string points_csv(const std::vector<Eigen::Vector3d>& unit_vectors) {
  std::string out = "index,theta,phi,x,y,z\n";
  for (std::size_t i = 0; i < unit_vectors.size(); ++i) {
    const Eigen::Vector3d& v = unit_vectors[i];
    const SpherePoint p = SpherePoint::from_vector(v);
    out += std::to_string(i) + ',';
    append_row(out, {p.theta(), p.phi(), v.x(), v.y(), v.z()});
  }
  return out;
}

std::string grid_csv(const std::vector<GridSample>& grid) {
  std::string out = "theta,phi,g2\n";
  out.reserve(out.size() + grid.size() * 48);
  for (const auto& s : grid) append_row(out, {s.theta, s.phi, s.g2});
  return out;
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::string out = "n,toth_eg,thomson_eg,dicke_lower,upper\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',';
    append_row(out, {r.toth_eg, r.thomson_eg, r.dicke_lower, r.upper});
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw FormatError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace symgeo

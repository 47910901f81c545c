#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symgeo/classical.hpp"
#include "symgeo/extremal.hpp"
#include "symgeo/geometric_measure.hpp"
#include "symgeo/io.hpp"
#include "symgeo/majorana.hpp"

namespace py = pybind11;
using namespace symgeo;

namespace {

SymmetricState to_state(const Eigen::VectorXcd& coeffs) { return SymmetricState(coeffs); }

py::tuple point_tuple(const SpherePoint& p) { return py::make_tuple(p.theta(), p.phi()); }

py::list point_list(const std::vector<SpherePoint>& pts) {
  py::list out;
  for (const auto& p : pts) out.append(point_tuple(p));
  return out;
}

py::dict analysis_dict(const CppAnalysis& a) {
  py::dict d;
  d["e_g"] = a.e_g;
  d["g_max"] = a.g_max;
  d["cpps"] = point_list(a.cpps);
  d["cpp_count"] = a.cpp_count();
  d["ring_theta"] = a.ring_theta ? py::object(py::float_(*a.ring_theta)) : py::object(py::none());
  d["ring_axis"] = a.ring_theta ? py::object(point_tuple(a.ring_axis)) : py::object(py::none());
  py::list others;
  for (const auto& m : a.local_maxima) others.append(py::make_tuple(m.point.theta(), m.point.phi(), m.g));
  d["other_local_maxima"] = others;
  d["strategy"] = a.strategy;
  return d;
}

Eigen::MatrixXd point_matrix(const std::vector<Eigen::Vector3d>& pts) {
  Eigen::MatrixXd m(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(i) = pts[i].transpose();
  return m;
}

py::dict classical_dict(const ClassicalConfiguration& c) {
  py::dict d;
  d["points"] = point_matrix(c.points);
  d["toth_cost"] = c.toth_cost;
  d["thomson_cost"] = c.thomson_cost;
  d["converged"] = c.converged;
  d["state"] = to_symmetric_state(c).coeffs();
  return d;
}

ClassicalSearchConfig classical_config(std::uint64_t seed, int restarts, int threads) {
  ClassicalSearchConfig c;
  c.seed = seed;
  c.restarts = restarts;
  c.threads = threads;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Geometric entanglement of symmetric multiqubit states";

  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def(
      "normalize", [](const Eigen::VectorXcd& c) { return to_state(c).coeffs(); }, py::arg("coeffs"),
      "Unit-norm copy of a Dicke-basis coefficient vector.");
  m.def(
      "dicke", [](int n, int k) { return make_dicke(n, k).coeffs(); }, py::arg("n"), py::arg("k"));
  m.def(
      "named_state", [](const std::string& name) { return named_state(name).coeffs(); }, py::arg("name"));
  m.def("named_state_names", &named_state_names);

  m.def(
      "state_to_points", [](const Eigen::VectorXcd& c) { return point_list(state_to_points(to_state(c)).points); },
      py::arg("coeffs"), "Majorana points as (theta, phi) pairs.");
  m.def(
      "points_to_state",
      [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<SpherePoint> sp;
        for (const auto& [t, p] : pts) sp.emplace_back(t, p);
        return points_to_state(sp).first.coeffs();
      },
      py::arg("points"));

  m.def(
      "overlap", [](const Eigen::VectorXcd& c, double theta, double phi) { return overlap(to_state(c), {theta, phi}); },
      py::arg("coeffs"), py::arg("theta"), py::arg("phi"), "|<sigma|^n |psi>| for the product state of (theta, phi).");
  m.def(
      "geometric_measure", [](const Eigen::VectorXcd& c) { return geometric_measure(to_state(c)); },
      py::arg("coeffs"));
  m.def(
      "find_cpps", [](const Eigen::VectorXcd& c) { return analysis_dict(find_cpps(to_state(c))); }, py::arg("coeffs"));
  m.def(
      "sphere_mean_g2",
      [](const Eigen::VectorXcd& c, int order) {
        const SymmetricState s = to_state(c);
        return sphere_mean_g2(s, order > 0 ? order : s.n() + 1);
      },
      py::arg("coeffs"), py::arg("order") = 0);
  m.def(
      "bounds",
      [](int n) {
        const BoundsReport b = bounds(n);
        py::dict d;
        d["n"] = b.n;
        d["upper"] = b.upper;
        d["dicke_lower"] = b.dicke_lower;
        d["stirling_approx"] = b.stirling_approx;
        d["general_lower"] = b.general_lower;
        return d;
      },
      py::arg("n"));

  m.def(
      "maximize",
      [](int n, const std::string& ansatz, const std::vector<int>& support, std::uint64_t seed, int restarts,
         int threads) {
        SearchConfig cfg;
        cfg.ansatz = parse_ansatz(ansatz, support);
        cfg.seed = seed;
        cfg.restarts = restarts;
        cfg.threads = threads;
        ExtremalResult r;
        {
          py::gil_scoped_release release;
          r = maximize_entanglement(n, cfg);
        }
        py::dict d;
        d["n"] = r.n;
        d["state"] = r.state.coeffs();
        d["analysis"] = analysis_dict(r.analysis);
        d["e_g"] = r.analysis.e_g;
        d["certificate"] = r.certificate;
        d["converged"] = r.converged;
        d["origin"] = r.origin;
        d["seed"] = r.seed;
        return d;
      },
      py::arg("n"), py::arg("ansatz") = "positive", py::arg("support") = std::vector<int>{}, py::arg("seed") = 1,
      py::arg("restarts") = 4, py::arg("threads") = 0);

  m.def(
      "solve_thomson",
      [](int n, std::uint64_t seed, int restarts, int threads) {
        ClassicalConfiguration c;
        {
          py::gil_scoped_release release;
          c = solve_thomson(n, classical_config(seed, restarts, threads));
        }
        return classical_dict(c);
      },
      py::arg("n"), py::arg("seed") = 1, py::arg("restarts") = 24, py::arg("threads") = 0);
  m.def(
      "solve_toth",
      [](int n, std::uint64_t seed, int restarts, int threads) {
        ClassicalConfiguration c;
        {
          py::gil_scoped_release release;
          c = solve_toth(n, classical_config(seed, restarts, threads));
        }
        return classical_dict(c);
      },
      py::arg("n"), py::arg("seed") = 1, py::arg("restarts") = 24, py::arg("threads") = 0);

  m.attr("__version__") = SYMGEO_VERSION;
}

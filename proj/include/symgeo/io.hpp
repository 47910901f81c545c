#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "symgeo/classical.hpp"
#include "symgeo/extremal.hpp"
#include "symgeo/geometric_measure.hpp"
#include "symgeo/states.hpp"

namespace symgeo {

using json = nlohmann::json;

/// Malformed or unreadable input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Digits used for every number written by this module.
inline constexpr int kOutputDigits = 12;

/// Shortest decimal text of `x` rounded to 12 significant digits.
std::string format_number(double x);
/// `x` rounded to 12 significant digits, so JSON dumps stay short.
double round_output(double x);

/// Parses {"n": int, "coeffs": [[re, im], ...]}; a bare number counts as a
/// real coefficient. The result is renormalized, and `correction()` holds the
/// input norm.
SymmetricState state_from_json(const json& j);
SymmetricState parse_state(const std::string& text);
SymmetricState load_state(const std::filesystem::path& path);

json state_to_json(const SymmetricState& state);
json point_to_json(const SpherePoint& p);
json analysis_to_json(const CppAnalysis& analysis);
json symmetry_to_json(const SymmetryInfo& info);
json bounds_to_json(const BoundsReport& b);
json ansatz_to_json(const Ansatz& a);
json search_config_to_json(const SearchConfig& c);
/// State, CPPs, E_G, certificate, config echo and seed.
json result_bundle(const ExtremalResult& result, const SearchConfig& config);

/// Header `index,theta,phi,x,y,z`.
std::string points_csv(const std::vector<SpherePoint>& points);
/// Header `theta,phi,g2`.
std::string grid_csv(const std::vector<GridSample>& grid);
/// Header `n,toth_eg,thomson_eg,dicke_lower,upper`.
std::string curve_csv(const std::vector<CurveRow>& rows);

std::string points_csv(const std::vector<Eigen::Vector3d>& unit_vectors);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace symgeo

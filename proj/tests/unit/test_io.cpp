#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"
#include "symgeo/io.hpp"

using namespace symgeo;

TEST(Io, ParsesAndRenormalizes) {
  const SymmetricState s = parse_state(R"({"n": 2, "coeffs": [[3, 0], [0, 0], [0, 4]]})");
  EXPECT_EQ(s.n(), 2);
  EXPECT_NEAR(s.correction(), 5.0, 1e-15);
  EXPECT_NEAR(s[2].imag(), 0.8, 1e-15);
  EXPECT_NEAR(parse_state(R"({"n": 1, "coeffs": [1, -1]})")[1].real(), -1 / std::sqrt(2.0), 1e-15);
}

TEST(Io, RejectsMalformedInput) {
  EXPECT_THROW(parse_state("{"), FormatError);
  EXPECT_THROW(parse_state(R"({"coeffs": [1, 0]})"), FormatError);
  EXPECT_THROW(parse_state(R"({"n": 2, "coeffs": [1, 0]})"), FormatError);
  EXPECT_THROW(parse_state(R"({"n": 1, "coeffs": [[1], [0, 0]]})"), FormatError);
  EXPECT_THROW(parse_state(R"({"n": 1, "coeffs": [0, 0]})"), FormatError);
  EXPECT_THROW(parse_state(R"({"n": 0, "coeffs": [1]})"), FormatError);
  EXPECT_THROW(load_state("/nonexistent/state.json"), FormatError);
}

TEST(Io, StateJsonRoundTrip) {
  std::mt19937_64 rng(97);
  for (int n = 1; n <= 12; ++n) {
    const SymmetricState s = symgeo::testing::random_state(n, rng);
    const SymmetricState back = state_from_json(json::parse(state_to_json(s).dump()));
    EXPECT_GT(fidelity(s, back), 1 - 1e-11);
  }
}

TEST(Io, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(3.14159265358979), "3.14159265359");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(round_output(1.0 / 3), 0.333333333333);
}

TEST(Io, CsvLayouts) {
  const std::string pts = points_csv(std::vector<SpherePoint>{SpherePoint::north(), SpherePoint::south()});
  EXPECT_EQ(pts, "index,theta,phi,x,y,z\n0,0,0,0,0,1\n1,3.14159265359,0,0,0,-1\n");
  EXPECT_EQ(grid_csv({{0.5, 1.0, 0.25}}), "theta,phi,g2\n0.5,1,0.25\n");
  EXPECT_EQ(curve_csv({{4, 1.5, 1.5, 1.0, 2.0}}), "n,toth_eg,thomson_eg,dicke_lower,upper\n4,1.5,1.5,1,2\n");
}

TEST(Io, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "symgeo_io_test.json";
  write_text(path, R"({"n": 3, "coeffs": [[1, 0], [0, 0], [0, 0], [1, 0]]})");
  EXPECT_NEAR(load_state(path)[3].real(), 1 / std::sqrt(2.0), 1e-15);
  std::filesystem::remove(path);
}

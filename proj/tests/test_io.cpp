#include "csrbf/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

namespace csrbf {
namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("csrbf_io_" + std::to_string(::getpid()) + "_" + name);
}

TEST(Csv, HeaderIsSkipped) {
  std::istringstream in("x1,x2\n0.5,0.25\n\n1e-3,-2\n");
  const auto rows = io::read_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<double>{0.5, 0.25}));
  EXPECT_EQ(rows[1], (std::vector<double>{1e-3, -2.0}));
}

TEST(Csv, NoHeader) {
  std::istringstream in("1,2\n3,4\n");
  EXPECT_EQ(io::read_csv(in).size(), 2u);
}

TEST(Csv, RaggedRowNamesTheLine) {
  std::istringstream in("x,y\n1,2\n3\n");
  try {
    io::read_csv(in, "pts.csv");
    FAIL();
  } catch (const io::FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("pts.csv:3"), std::string::npos) << e.what();
  }
}

TEST(Csv, NonNumericBodyFails) {
  std::istringstream in("1,2\n3,abc\n");
  EXPECT_THROW(io::read_csv(in), io::FormatError);
}

TEST(Csv, MissingFile) {
  EXPECT_THROW(io::read_csv(fs::path("/nonexistent/points.csv")), io::FormatError);
}

TEST(Csv, PointsRoundTripBitwise) {
  const auto points = random_pointset(3, 100, 5, 0.05);
  const auto path = temp_file("points.csv");
  {
    auto out = io::open_output(path);
    io::write_points_csv(out, points);
  }
  const auto back = io::read_points_csv(path);
  EXPECT_EQ(back.dim(), 3);
  EXPECT_TRUE(back.coords() == points.coords());
  fs::remove(path);
}

TEST(Csv, DuplicatePointsRejectedOnRead) {
  std::istringstream in("0.1,0.2\n0.3,0.4\n0.1,0.2\n");
  EXPECT_THROW(io::points_from_rows(io::read_csv(in), "dup"), DuplicatePointError);
}

TEST(Csv, ValuesSingleColumn) {
  const auto path = temp_file("values.csv");
  const std::vector<double> v{1.0, -0.1, 1.0 / 3.0};
  {
    auto out = io::open_output(path);
    io::write_values_csv(out, v);
  }
  EXPECT_EQ(io::read_values_csv(path), v);
  {
    auto out = io::open_output(path);
    out << "1,2\n";
  }
  EXPECT_THROW(io::read_values_csv(path), io::FormatError);
  fs::remove(path);
}

TEST(Csv, ConvergenceHeader) {
  std::ostringstream out;
  io::write_convergence_csv(out, {ConvergenceRow{20, 0.1, 1e-3, 50.0, {}}});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "N,fill_distance,sup_error,cond_estimate");
}

TEST(Json, PolynomialFormat) {
  const auto j = io::to_json(derivative_poly(2));
  EXPECT_EQ(j["order"], 2);
  ASSERT_EQ(j["terms"].size(), 2u);
  EXPECT_EQ(j["terms"][0]["alpha_pow"], 2);
  EXPECT_EQ(j["terms"][0]["u_pow"], 4);
  EXPECT_EQ(j["terms"][0]["coeff"], "1");
  EXPECT_EQ(j["terms"][1]["coeff"], "-2");
}

TEST(Json, PolynomialRoundTripKeepsBigCoefficients) {
  const auto q = derivative_poly(30);
  const auto back = io::poly_from_json(nlohmann::json::parse(io::to_json(q).dump()));
  EXPECT_EQ(back.order(), 30);
  EXPECT_TRUE(back.terms() == q.terms());
}

TEST(Json, MalformedPolynomial) {
  EXPECT_THROW(io::poly_from_json(nlohmann::json::parse(R"({"order": 2})")), io::FormatError);
  EXPECT_THROW(io::poly_from_json(nlohmann::json::parse(
                   R"({"order": 1, "terms": [{"alpha_pow": 1, "u_pow": 2, "coeff": "x"}]})")),
               io::FormatError);
}

TEST(Json, InterpolantRoundTrip) {
  const auto points = random_pointset(2, 40, 8, 0.1);
  std::vector<double> v(40);
  for (int i = 0; i < 40; ++i) v[i] = std::cos(i * 0.3);
  const auto s = fit(points, v, KernelParams(6.0, 0.15, 2));
  const auto back = io::interpolant_from_json(nlohmann::json::parse(io::to_json(s).dump()));
  EXPECT_TRUE(back.centers().coords() == s.centers().coords());
  EXPECT_TRUE(back.coefficients() == s.coefficients());
  EXPECT_EQ(back.params().alpha(), 6.0);
  EXPECT_EQ(back.params().delta(), 0.15);
  EXPECT_EQ(back.max_residual(), s.max_residual());
  const std::vector<double> x{0.3, 0.6};
  EXPECT_EQ(back.evaluate(x), s.evaluate(x));
}

TEST(Json, PdReportKeepsTimingUnderMeta) {
  Eigen::MatrixXd coords(1, 2);
  coords << 0.0, 0.5;
  const auto report = verify_pd(PointSet(1, coords, 42), KernelParams(6.0, 1.0, 1));
  const auto j = io::to_json(report);
  EXPECT_TRUE(j.contains("meta"));
  EXPECT_TRUE(j["meta"].contains("elapsed_seconds"));
  EXPECT_FALSE(j.contains("elapsed_seconds"));
  EXPECT_EQ(j["seed"], 42);
  EXPECT_EQ(j["positive"], true);
  EXPECT_EQ(j["n"], 2);
}

TEST(Json, NonFiniteNumbersBecomeNull) {
  PdReport report;
  report.min_eigenvalue = std::nan("");
  report.condition_estimate = std::numeric_limits<double>::infinity();
  const auto j = io::to_json(report);
  EXPECT_TRUE(j["min_eigenvalue"].is_null());
  EXPECT_TRUE(j["condition_estimate"].is_null());
  EXPECT_NO_THROW(j.dump());
}

TEST(Json, SignReport) {
  const auto j = io::to_json(check_sign_condition(3, 6.0, 100, 0.0, EvalMode::exact));
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["violations"].size(), 0u);
  EXPECT_EQ(j["order"], 3);
}

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(std::stod(io::format_double(0.1)), 0.1);
  EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace csrbf

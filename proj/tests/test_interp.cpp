#include "csrbf/interp.hpp"
#include "csrbf/symbolic.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace csrbf {
namespace {

PointSet line_points(int n, double spacing) {
  Eigen::MatrixXd coords(1, n);
  for (int k = 0; k < n; ++k) coords(0, k) = k * spacing;
  return PointSet(1, coords);
}

std::vector<double> sample(const TargetFunction& f, const PointSet& points) {
  std::vector<double> v(points.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) v[i] = f(points.point(i));
  return v;
}

// ---------------------------------------------------------------------------

TEST(CellGrid, EveryIndexStoredOnce) {
  const auto points = random_pointset(3, 500, 1, 0.02);
  const CellGrid grid(points.coords(), 0.1);
  auto all = grid.all_indices();
  std::sort(all.begin(), all.end());
  ASSERT_EQ(all.size(), 500u);
  for (Eigen::Index i = 0; i < 500; ++i) EXPECT_EQ(all[i], i);
  EXPECT_EQ(grid.point_count(), 500u);
}

TEST(CellGrid, CandidatesCoverTheBall) {
  for (int d : {1, 2, 3, 12}) {
    const auto points = random_pointset(d, 300, 2, default_min_separation(d, 300));
    const double h = d == 12 ? 0.6 : 0.15;
    const CellGrid grid(points.coords(), h);
    const auto queries = random_pointset(d, 50, 3, 1e-6);
    for (Eigen::Index q = 0; q < queries.size(); ++q) {
      const auto cand = grid.candidates(queries.point(q));
      EXPECT_TRUE(std::is_sorted(cand.begin(), cand.end()));
      const std::set<Eigen::Index> found(cand.begin(), cand.end());
      EXPECT_EQ(found.size(), cand.size());
      for (Eigen::Index i = 0; i < points.size(); ++i)
        if ((points.coords().col(i) - queries.coords().col(q)).norm() < h) EXPECT_TRUE(found.count(i)) << "d=" << d;
    }
  }
}

TEST(CellGrid, RejectsBadCellSize) {
  EXPECT_THROW(CellGrid(Eigen::MatrixXd::Zero(2, 3), 0.0), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(Fit, SinglePoint) {
  const KernelParams p(12.0, 1.0, 2);
  const PointSet one(2, Eigen::MatrixXd::Constant(2, 1, 0.5));
  const std::vector<double> v{3.0};
  const auto s = fit(one, v, p);
  EXPECT_NEAR(s.coefficients()[0], 3.0 * std::exp(12.0), 1e-9 * std::exp(12.0));
  const std::vector<double> x{0.5, 0.5};
  EXPECT_NEAR(evaluate(s, x), 3.0, 1e-12);
}

TEST(Fit, ZeroDataGivesZeroCoefficients) {
  const auto points = random_pointset(2, 30, 5, 0.1);
  const std::vector<double> zeros(30, 0.0);
  const auto s = fit(points, zeros, KernelParams(6.0, 0.2, 2));
  EXPECT_TRUE((s.coefficients().array() == 0.0).all());
  EXPECT_EQ(s.max_residual(), 0.0);
}

TEST(Fit, TwoByTwoMatchesExplicitInverse) {
  const KernelParams p(6.0, 1.0, 1);
  const auto points = line_points(2, 0.5);
  for (const auto& v : {std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 2.0}}) {
    const auto s = fit(points, v, p);
    const double a = std::exp(-6.0), b = std::exp(-8.0), det = a * a - b * b;
    EXPECT_NEAR(s.coefficients()[0], (a * v[0] - b * v[1]) / det, 1e-9 * std::exp(6.0));
    EXPECT_NEAR(s.coefficients()[1], (a * v[1] - b * v[0]) / det, 1e-9 * std::exp(6.0));
  }
}

TEST(Evaluate, SingleCenterAtHalfRadius) {
  const KernelParams p(6.0, 0.4, 2);
  const PointSet one(2, Eigen::MatrixXd::Zero(2, 1));
  const auto s = fit(one, std::vector<double>{2.0}, p);
  const std::vector<double> x{0.12, 0.16};
  EXPECT_NEAR(s.evaluate(x), s.coefficients()[0] * std::exp(-8.0), 1e-14);
}

TEST(Fit, ShapeErrors) {
  const auto points = random_pointset(2, 5, 1, 0.1);
  const KernelParams p(6.0, 0.3, 2);
  const std::vector<double> four(4, 1.0);
  EXPECT_THROW(fit(points, four, p), std::invalid_argument);
  std::vector<double> bad(5, 1.0);
  bad[2] = std::nan("");
  EXPECT_THROW(fit(points, bad, p), std::invalid_argument);
  EXPECT_THROW(fit(points, std::vector<double>(5, 1.0), KernelParams(6.0, 0.3, 3)), std::invalid_argument);
}

TEST(Fit, ReproducesAShiftedKernel) {
  // Supports do not overlap, so f = Phi(. - x_0) has coefficients e_0.
  const KernelParams p(6.0, 0.2, 2);
  const auto points = random_pointset(2, 12, 9, 0.25);
  const Eigen::VectorXd x0 = points.coords().col(0);
  std::vector<double> v(12);
  for (int i = 0; i < 12; ++i) {
    const Eigen::VectorXd diff = points.coords().col(i) - x0;
    v[i] = big_phi({diff.data(), 2}, p);
  }
  const auto s = fit(points, v, p);
  EXPECT_NEAR(s.coefficients()[0], 1.0, 1e-14);
  for (int i = 1; i < 12; ++i) EXPECT_EQ(s.coefficients()[i], 0.0);
}

// Support radius twice the separation, alpha at the dimension's threshold.
struct Instance {
  PointSet points;
  KernelParams params;
};

Instance well_posed_instance(int d, int n, std::uint64_t seed) {
  const double min_sep = 0.5 * std::pow(static_cast<double>(n), -1.0 / d);
  auto points = random_pointset(d, n, seed, min_sep);
  return {std::move(points), KernelParams(static_cast<double>(min_alpha_for_dimension(d)), 2.0 * min_sep, d)};
}

TEST(Fit, ResidualAtCentersIsTiny) {
  for (int d = 1; d <= 3; ++d)
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto inst = well_posed_instance(d, 150, seed);
      const auto f = make_target("gaussian", d);
      const auto v = sample(f, inst.points);
      const auto s = fit(inst.points, v, inst.params);
      double scale = 0.0;
      for (double x : v) scale = std::max(scale, std::abs(x));
      EXPECT_LE(s.max_residual(), 1e-10 * scale) << "d=" << d;
      for (Eigen::Index i = 0; i < inst.points.size(); ++i)
        EXPECT_NEAR(s.evaluate(inst.points.point(i)), v[i], 1e-10 * scale);
    }
}

TEST(Fit, LinearInTheData) {
  const auto inst = well_posed_instance(2, 120, 8);
  const auto f = sample(make_target("sin", 2), inst.points);
  const auto g = sample(make_target("franke", 2), inst.points);
  std::vector<double> h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[i] = 2.5 * f[i] - 0.75 * g[i];
  const auto sf = fit(inst.points, f, inst.params);
  const auto sg = fit(inst.points, g, inst.params);
  const auto sh = fit(inst.points, h, inst.params);
  const Eigen::VectorXd combo = 2.5 * sf.coefficients() - 0.75 * sg.coefficients();
  EXPECT_LE((sh.coefficients() - combo).cwiseAbs().maxCoeff(), 1e-10 * combo.cwiseAbs().maxCoeff());
}

TEST(Fit, EquispacedLineFailsWithReport) {
  const KernelParams p(12.0, 1.0, 1);
  const auto points = line_points(8, 1.0 / 16.0);
  try {
    fit(points, std::vector<double>(8, 1.0), p);
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_FALSE(e.report().factorization_success);
    EXPECT_LT(e.report().min_eigenvalue, 0.0);
    EXPECT_EQ(e.report().n, 8);
    EXPECT_NE(std::string(e.what()).find("not numerically positive definite"), std::string::npos);
  }
}

TEST(Fit, SparsePathAboveDenseLimit) {
  const auto inst = well_posed_instance(2, 2500, 4);
  const auto v = sample(make_target("gaussian", 2), inst.points);
  const auto s = fit(inst.points, v, inst.params);
  EXPECT_LE(s.max_residual(), 1e-10);

  const auto line = line_points(2100, 1.0 / 16.0);
  try {
    fit(line, std::vector<double>(2100, 1.0), KernelParams(12.0, 1.0, 1));
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_FALSE(e.report().factorization_success);
    EXPECT_TRUE(std::isnan(e.report().min_eigenvalue));
  }
}

TEST(SparseGram, EqualsDenseGram) {
  for (int d : {1, 2, 3}) {
    const auto points = random_pointset(d, 400, 6, default_min_separation(d, 400));
    const KernelParams p(12.0, 0.2, d);
    const Eigen::MatrixXd dense = gram_matrix(points, p);
    const Eigen::MatrixXd from_sparse = Eigen::MatrixXd(sparse_gram(points, p));
    EXPECT_EQ(dense, from_sparse) << "d=" << d;
  }
}

// ---------------------------------------------------------------------------

TEST(Evaluate, OutsideAllSupportsIsZero) {
  const auto inst = well_posed_instance(2, 50, 2);
  const auto s = fit(inst.points, sample(make_target("constant", 2), inst.points), inst.params);
  const std::vector<double> far{5.0, 5.0};
  EvalStats stats;
  EXPECT_EQ(s.evaluate(far, &stats), 0.0);
  EXPECT_EQ(stats.contributions, 0u);
}

TEST(Evaluate, DimensionMismatch) {
  const auto inst = well_posed_instance(2, 20, 2);
  const auto s = fit(inst.points, std::vector<double>(20, 1.0), inst.params);
  const std::vector<double> x{0.5};
  EXPECT_THROW(s.evaluate(x), std::invalid_argument);
  EXPECT_THROW(s.evaluate_many(Eigen::MatrixXd::Zero(3, 4)), std::invalid_argument);
}

TEST(Evaluate, ManyMatchesSingle) {
  const auto inst = well_posed_instance(3, 200, 12);
  const auto s = fit(inst.points, sample(make_target("sin", 3), inst.points), inst.params);
  const auto queries = random_pointset(3, 300, 13, 1e-6);
  const Eigen::VectorXd many = s.evaluate_many(queries.coords());
  for (Eigen::Index q = 0; q < queries.size(); ++q) EXPECT_EQ(many[q], s.evaluate(queries.point(q)));
}

TEST(Evaluate, OnlyCentersInsideSupportContribute) {
  const auto inst = well_posed_instance(2, 400, 14);
  const auto s = fit(inst.points, sample(make_target("franke", 2), inst.points), inst.params);
  const auto queries = random_pointset(2, 200, 15, 1e-6);
  for (Eigen::Index q = 0; q < queries.size(); ++q) {
    EvalStats stats;
    s.evaluate(queries.point(q), &stats);
    // Centers right at the edge of the support underflow to zero and are skipped.
    std::size_t inside = 0, nonzero = 0;
    for (Eigen::Index i = 0; i < inst.points.size(); ++i) {
      const Eigen::VectorXd diff = queries.coords().col(q) - inst.points.coords().col(i);
      if (diff.norm() >= inst.params.delta()) continue;
      ++inside;
      nonzero += big_phi({diff.data(), 2}, inst.params) != 0.0 ? 1 : 0;
    }
    EXPECT_LE(stats.contributions, inside);
    EXPECT_EQ(stats.contributions, nonzero);
    EXPECT_LE(stats.candidates, 9u * 4u);
  }
}

TEST(Sparsity, HalvingDeltaQuartersNonzerosInTheSquare) {
  const auto points = random_pointset(2, 2000, 17, default_min_separation(2, 2000));
  const auto wide = sparse_gram(points, KernelParams(6.0, 0.1, 2));
  const auto narrow = sparse_gram(points, KernelParams(6.0, 0.05, 2));
  const double ratio = static_cast<double>(wide.nonZeros()) / static_cast<double>(narrow.nonZeros());
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);
}

// ---------------------------------------------------------------------------

TEST(Targets, KnownNamesAndErrors) {
  const std::vector<double> x{0.25, 0.5};
  EXPECT_EQ(make_target("constant", 2)(x), 1.0);
  EXPECT_NEAR(make_target("sin", 2)(x), 1.0, 1e-15);
  EXPECT_NEAR(make_target("gaussian", 2)(x), std::exp(-0.625), 1e-15);
  EXPECT_TRUE(std::isfinite(make_target("franke", 2)(x)));
  EXPECT_THROW(make_target("franke", 1), std::invalid_argument);
  EXPECT_THROW(make_target("cosine", 2), std::invalid_argument);
}

TEST(Convergence, RowContract) {
  ConvergenceOptions options;
  options.dim = 1;
  options.levels = {10, 20, 40};
  options.seed = 3;
  options.fill_samples = 2000;
  const auto rows = convergence_experiment(make_target("sin", 1), KernelParams(6.0, 0.05, 1), options);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].n, options.levels[i]);
    EXPECT_GT(rows[i].fill_distance, 0.0);
    if (rows[i].failure.empty()) {
      EXPECT_TRUE(std::isfinite(rows[i].sup_error));
      EXPECT_GE(rows[i].cond_estimate, 1.0);
    } else {
      EXPECT_TRUE(std::isnan(rows[i].sup_error));
    }
  }
  EXPECT_LT(rows[2].fill_distance, rows[0].fill_distance);

  const auto again = convergence_experiment(make_target("sin", 1), KernelParams(6.0, 0.05, 1), options);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].fill_distance, again[i].fill_distance);
    EXPECT_EQ(std::isnan(rows[i].sup_error), std::isnan(again[i].sup_error));
    if (!std::isnan(rows[i].sup_error)) EXPECT_EQ(rows[i].sup_error, again[i].sup_error);
  }
}

TEST(Convergence, FailingLevelsAreReportedAndLaterLevelsRun) {
  ConvergenceOptions options;
  options.dim = 1;
  options.levels = {40, 80};
  options.fill_samples = 1000;
  // Wide support at alpha = 12 on the line: the Gram matrices are indefinite.
  const auto rows = convergence_experiment(make_target("sin", 1), KernelParams(12.0, 1.0, 1), options);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_FALSE(row.failure.empty());
    EXPECT_TRUE(std::isnan(row.sup_error));
    EXPECT_GT(row.fill_distance, 0.0);
  }
}

TEST(Convergence, InvalidLevels) {
  ConvergenceOptions options;
  options.levels = {};
  EXPECT_THROW(convergence_experiment(make_target("sin", 1), KernelParams(6.0, 1.0, 1), options),
               std::invalid_argument);
  options.levels = {20, 10};
  EXPECT_THROW(convergence_experiment(make_target("sin", 1), KernelParams(6.0, 1.0, 1), options),
               std::invalid_argument);
}

TEST(FillDistance, GridOfCentersOnTheLine) {
  const auto points = line_points(11, 0.1);
  const double h = estimate_fill_distance(points, 20000, 1);
  EXPECT_LE(h, 0.05 + 1e-12);
  EXPECT_GT(h, 0.049);
}

}  // namespace
}  // namespace csrbf

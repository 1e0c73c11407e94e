#include "csrbf/interp.hpp"

#include "csrbf/batch.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace csrbf {

namespace {

void require_dim(std::size_t got, int expected, const char* what) {
  if (got != static_cast<std::size_t>(expected))
    throw std::invalid_argument(std::string(what) + " has dimension " + std::to_string(got) + ", expected " +
                                std::to_string(expected));
}

PdReport factorization_only_report(Eigen::Index n, const KernelParams& params) {
  PdReport report;
  report.params = params;
  report.n = n;
  report.factorization_success = false;
  report.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  report.max_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  report.condition_estimate = std::numeric_limits<double>::quiet_NaN();
  report.threshold = report.tolerance * params.peak() * static_cast<double>(n);
  return report;
}

std::string describe_failure(const PdReport& report) {
  std::string msg = "Gram matrix is not numerically positive definite (N=" + std::to_string(report.n) +
                    ", alpha=" + std::to_string(report.params.alpha()) +
                    ", delta=" + std::to_string(report.params.delta()) + ")";
  if (!std::isnan(report.min_eigenvalue)) {
    msg += "; min eigenvalue " + std::to_string(report.min_eigenvalue / report.params.peak()) + " x e^{-alpha}";
  }
  return msg;
}

}  // namespace

Interpolant::Interpolant(PointSet centers, Eigen::VectorXd coefficients, KernelParams params, double max_residual)
    : centers_(std::move(centers)),
      coefficients_(std::move(coefficients)),
      params_(params),
      grid_(centers_.coords(), params.delta()),
      max_residual_(max_residual) {
  if (coefficients_.size() != centers_.size())
    throw std::invalid_argument("interpolant has " + std::to_string(coefficients_.size()) + " coefficients for " +
                                std::to_string(centers_.size()) + " centers");
  require_dim(static_cast<std::size_t>(centers_.dim()), params_.dim(), "center set");
}

double Interpolant::evaluate(std::span<const double> x, EvalStats* stats) const {
  require_dim(x.size(), params_.dim(), "query point");
  const std::vector<Eigen::Index> candidates = grid_.candidates(x);
  double sum = 0.0;
  std::size_t contributions = 0;
  for (Eigen::Index i : candidates) {
    const double k = big_phi_between(x.data(), centers_.coords().col(i).data(), params_.dim(), params_);
    if (k != 0.0) {
      sum += coefficients_[i] * k;
      ++contributions;
    }
  }
  if (stats) {
    stats->candidates += candidates.size();
    stats->contributions += contributions;
  }
  return sum;
}

Eigen::VectorXd Interpolant::evaluate_many(const Eigen::MatrixXd& queries) const {
  require_dim(static_cast<std::size_t>(queries.rows()), params_.dim(), "query matrix");
  return batch::omp::evaluate(grid_, centers_.coords(), coefficients_, params_, queries);
}

Eigen::SparseMatrix<double> sparse_gram(const PointSet& points, const KernelParams& params) {
  require_dim(static_cast<std::size_t>(points.dim()), params.dim(), "point set");
  const Eigen::Index n = points.size();
  const CellGrid grid(points.coords(), params.delta());
  std::vector<std::vector<Eigen::Triplet<double>>> rows(n);

#pragma omp parallel for schedule(dynamic, 64)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j : grid.candidates(points.point(i))) {
      const double a = big_phi_between(points.coords().col(i).data(), points.coords().col(j).data(), params.dim(),
                                       params);
      if (a != 0.0) rows[i].emplace_back(i, j, a);
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& row : rows) triplets.insert(triplets.end(), row.begin(), row.end());
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Interpolant fit(const PointSet& centers, std::span<const double> values, const KernelParams& params) {
  require_dim(static_cast<std::size_t>(centers.dim()), params.dim(), "center set");
  if (values.size() != static_cast<std::size_t>(centers.size()))
    throw std::invalid_argument("got " + std::to_string(values.size()) + " values for " +
                                std::to_string(centers.size()) + " centers");
  const Eigen::Map<const Eigen::VectorXd> f(values.data(), static_cast<Eigen::Index>(values.size()));
  if (!f.allFinite()) throw std::invalid_argument("data values must be finite");

  Eigen::VectorXd coefficients;
  if (centers.size() <= kDenseLimit) {
    const Eigen::MatrixXd a = gram_matrix(centers, params);
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
      PdReport report = verify_pd_matrix(a, params);
      report.seed = centers.seed();
      throw FitError(describe_failure(report), std::move(report));
    }
    coefficients = llt.solve(f);
  } else {
    const Eigen::SparseMatrix<double> a = sparse_gram(centers, params);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(a);
    if (llt.info() != Eigen::Success) {
      PdReport report = factorization_only_report(centers.size(), params);
      report.seed = centers.seed();
      throw FitError(describe_failure(report), std::move(report));
    }
    coefficients = llt.solve(f);
  }

  if (!coefficients.allFinite()) {
    PdReport report = centers.size() <= kDenseLimit ? verify_pd(centers, params)
                                                    : factorization_only_report(centers.size(), params);
    throw FitError("interpolation coefficients are not finite", std::move(report));
  }

  Interpolant s(centers, std::move(coefficients), params);
  const Eigen::VectorXd at_centers = s.evaluate_many(centers.coords());
  const double residual = (at_centers - f).cwiseAbs().maxCoeff();
  return Interpolant(centers, s.coefficients(), params, residual);
}

// ---------------------------------------------------------------------------

TargetFunction make_target(const std::string& name, int dim) {
  if (dim < 1) throw std::invalid_argument("target dimension must be >= 1");
  if (name == "constant") return [](std::span<const double>) { return 1.0; };
  if (name == "sin") return [](std::span<const double> x) { return std::sin(2.0 * std::numbers::pi * x[0]); };
  if (name == "gaussian")
    return [](std::span<const double> x) {
      double r2 = 0.0;
      for (double xk : x) r2 += (xk - 0.5) * (xk - 0.5);
      return std::exp(-10.0 * r2);
    };
  if (name == "franke") {
    if (dim < 2) throw std::invalid_argument("the franke target needs dimension >= 2");
    return [](std::span<const double> p) {
      const double x = 9.0 * p[0];
      const double y = 9.0 * p[1];
      return 0.75 * std::exp(-((x - 2) * (x - 2) + (y - 2) * (y - 2)) / 4.0) +
             0.75 * std::exp(-(x + 1) * (x + 1) / 49.0 - (y + 1) / 10.0) +
             0.5 * std::exp(-((x - 7) * (x - 7) + (y - 3) * (y - 3)) / 4.0) -
             0.2 * std::exp(-(x - 4) * (x - 4) - (y - 7) * (y - 7));
    };
  }
  throw std::invalid_argument("unknown target function '" + name + "' (expected constant, sin, gaussian, franke)");
}

Eigen::MatrixXd error_evaluation_points(int dim, std::uint64_t seed, int mc_samples) {
  if (dim == 1) {
    Eigen::MatrixXd pts(1, 10001);
    for (Eigen::Index i = 0; i < pts.cols(); ++i) pts(0, i) = static_cast<double>(i) / 10000.0;
    return pts;
  }
  if (dim == 2) {
    constexpr int side = 101;
    Eigen::MatrixXd pts(2, side * side);
    for (int i = 0; i < side; ++i)
      for (int j = 0; j < side; ++j) {
        pts(0, i * side + j) = static_cast<double>(i) / (side - 1);
        pts(1, i * side + j) = static_cast<double>(j) / (side - 1);
      }
    return pts;
  }
  std::mt19937_64 engine(seed);
  Eigen::MatrixXd pts(dim, mc_samples);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return pts;
}

double estimate_fill_distance(const PointSet& centers, int samples, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Eigen::MatrixXd pts(centers.dim(), samples);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return batch::omp::nearest_distance(centers.coords(), pts).maxCoeff();
}

std::vector<ConvergenceRow> convergence_experiment(const TargetFunction& target, const KernelParams& params,
                                                   const ConvergenceOptions& options) {
  if (options.levels.empty()) throw std::invalid_argument("convergence experiment needs at least one level");
  for (std::size_t i = 0; i < options.levels.size(); ++i) {
    if (options.levels[i] < 1) throw std::invalid_argument("level sizes must be >= 1");
    if (i > 0 && options.levels[i] <= options.levels[i - 1])
      throw std::invalid_argument("levels must be strictly increasing");
  }
  require_dim(static_cast<std::size_t>(options.dim), params.dim(), "experiment");

  const Eigen::MatrixXd eval_points = error_evaluation_points(options.dim, derive_seed(options.seed, 0xe7a1),
                                                              options.mc_samples);
  Eigen::VectorXd exact(eval_points.cols());
  for (Eigen::Index i = 0; i < eval_points.cols(); ++i)
    exact[i] = target({eval_points.col(i).data(), static_cast<std::size_t>(options.dim)});

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<ConvergenceRow> rows;
  for (std::size_t level = 0; level < options.levels.size(); ++level) {
    const int n = options.levels[level];
    ConvergenceRow row{n, nan, nan, nan, {}};
    try {
      const std::uint64_t seed = derive_seed(options.seed, level);
      const double min_sep = options.min_sep_factor * std::pow(static_cast<double>(n), -1.0 / options.dim);
      const PointSet centers = random_pointset(options.dim, n, seed, min_sep);
      row.fill_distance = estimate_fill_distance(centers, options.fill_samples, derive_seed(seed, 1));

      std::vector<double> values(n);
      for (int i = 0; i < n; ++i) values[i] = target(centers.point(i));

      try {
        const Interpolant s = fit(centers, values, params);
        row.sup_error = (s.evaluate_many(eval_points) - exact).cwiseAbs().maxCoeff();
        if (n <= kDenseLimit) row.cond_estimate = verify_pd(centers, params).condition_estimate;
      } catch (const FitError& e) {
        row.cond_estimate = e.report().condition_estimate;
        row.failure = e.what();
      }
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace csrbf

#include "csrbf/pdcheck.hpp"

#include "csrbf/batch.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

namespace csrbf {

namespace {

void require_same_dim(const PointSet& points, const KernelParams& params) {
  if (points.dim() != params.dim())
    throw std::invalid_argument("point set has dimension " + std::to_string(points.dim()) + ", kernel expects " +
                                std::to_string(params.dim()));
}

}  // namespace

Eigen::MatrixXd gram_matrix(const PointSet& points, const KernelParams& params) {
  require_same_dim(points, params);
  return batch::omp::gram(points.coords(), params);
}

PdReport verify_pd_matrix(const Eigen::MatrixXd& gram, const KernelParams& params, double tolerance) {
  if (!(tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (gram.rows() != gram.cols()) throw std::invalid_argument("Gram matrix must be square");
  if (gram.rows() > kDenseLimit)
    throw std::invalid_argument("dense eigen-analysis is limited to N <= " + std::to_string(kDenseLimit));

  const auto start = std::chrono::steady_clock::now();
  PdReport report;
  report.params = params;
  report.n = gram.rows();
  report.tolerance = tolerance;
  report.threshold = tolerance * params.peak() * static_cast<double>(gram.rows());

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  report.factorization_success = llt.info() == Eigen::Success;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gram, Eigen::EigenvaluesOnly);
  if (eigen.info() == Eigen::Success && gram.rows() > 0) {
    report.min_eigenvalue = eigen.eigenvalues().minCoeff();
    report.max_eigenvalue = eigen.eigenvalues().maxCoeff();
  } else {
    report.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    report.max_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  }
  report.condition_estimate = report.min_eigenvalue > 0.0 ? report.max_eigenvalue / report.min_eigenvalue
                                                          : std::numeric_limits<double>::infinity();
  report.eigen_positive = report.min_eigenvalue > -report.threshold;
  report.positive = report.factorization_success && report.eigen_positive;
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

PdReport verify_pd(const PointSet& points, const KernelParams& params, double tolerance) {
  require_same_dim(points, params);
  if (points.size() > kDenseLimit)
    throw std::invalid_argument("dense eigen-analysis is limited to N <= " + std::to_string(kDenseLimit));
  const auto start = std::chrono::steady_clock::now();
  PdReport report = verify_pd_matrix(gram_matrix(points, params), params, tolerance);
  report.seed = points.seed();
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int SweepResult::passed() const {
  int count = 0;
  for (const auto& r : reports) count += r.positive ? 1 : 0;
  return count;
}

SweepResult pd_sweep(const SweepOptions& options) {
  if (options.dims.empty()) throw std::invalid_argument("pd_sweep: dimension list is empty");
  if (options.alphas.empty()) throw std::invalid_argument("pd_sweep: alpha list is empty");
  if (options.n < 1) throw std::invalid_argument("pd_sweep: n must be >= 1");
  if (options.trials < 1) throw std::invalid_argument("pd_sweep: trials must be >= 1");
  for (int d : options.dims)
    if (d < 1) throw std::invalid_argument("pd_sweep: dimensions must be >= 1");
  // Validates alpha and delta up front.
  for (double a : options.alphas) KernelParams(a, options.delta, 1);

  struct Task {
    int dim;
    std::size_t alpha_index;
    int trial;
  };
  std::vector<Task> tasks;
  for (int d : options.dims)
    for (std::size_t a = 0; a < options.alphas.size(); ++a)
      for (int t = 0; t < options.trials; ++t) tasks.push_back({d, a, t});

  SweepResult result;
  result.reports.resize(tasks.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(tasks.size()); ++k) {
    try {
      const Task& task = tasks[k];
      const std::uint64_t seed = derive_seed(
          derive_seed(derive_seed(options.seed, static_cast<std::uint64_t>(task.dim)), task.alpha_index),
          static_cast<std::uint64_t>(task.trial));
      const double min_sep = options.min_sep.value_or(default_min_separation(task.dim, options.n));
      const PointSet points = random_pointset(task.dim, options.n, seed, min_sep);
      const KernelParams params(options.alphas[task.alpha_index], options.delta, task.dim);
      PdReport report = verify_pd(points, params, options.tolerance);
      report.trial = task.trial;
      result.reports[k] = std::move(report);
    } catch (...) {
#pragma omp critical(csrbf_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t k = 0;
  for (int d : options.dims) {
    for (double a : options.alphas) {
      SweepCell cell{d, a, options.trials, 0, std::numeric_limits<double>::infinity()};
      for (int t = 0; t < options.trials; ++t, ++k) {
        const PdReport& r = result.reports[k];
        cell.passed += r.positive ? 1 : 0;
        cell.worst_min_eigenvalue = std::min(cell.worst_min_eigenvalue, r.min_eigenvalue);
      }
      result.cells.push_back(cell);
    }
  }
  return result;
}

}  // namespace csrbf

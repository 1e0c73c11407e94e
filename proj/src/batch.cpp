#include "csrbf/batch.hpp"

#include <algorithm>
#include <limits>

namespace csrbf::batch {

namespace {

double gram_entry(const Eigen::MatrixXd& coords, Eigen::Index i, Eigen::Index j, const KernelParams& params) {
  return big_phi_between(coords.col(i).data(), coords.col(j).data(), params.dim(), params);
}

double signed_value(const DerivativePoly& poly, const SignGridPoint& p, double alpha) {
  const double v = eval_derivative_at_u(poly, p.u(), alpha);
  return poly.order() % 2 == 0 ? v : -v;
}

int signed_sign(const DerivativePoly& poly, const SignGridPoint& p, const Rational& alpha) {
  const Rational u(BigInt(p.u_num), BigInt(p.u_den));
  const int s = exact_sign(poly, u, alpha);
  return poly.order() % 2 == 0 ? s : -s;
}

double evaluate_one(const CellGrid& grid, const Eigen::MatrixXd& centers, const Eigen::VectorXd& coefficients,
                    const KernelParams& params, const double* q) {
  double sum = 0.0;
  for (Eigen::Index i : grid.candidates({q, static_cast<std::size_t>(params.dim())})) {
    const double k = big_phi_between(q, centers.col(i).data(), params.dim(), params);
    if (k != 0.0) sum += coefficients[i] * k;
  }
  return sum;
}

double nearest_one(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& samples, Eigen::Index s) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < centers.cols(); ++i) best = std::min(best, (samples.col(s) - centers.col(i)).norm());
  return best;
}

// Closest later point to column i.
serial::ClosestPair closest_after(const Eigen::MatrixXd& coords, Eigen::Index i) {
  serial::ClosestPair best{std::numeric_limits<double>::infinity(), i, i};
  for (Eigen::Index j = i + 1; j < coords.cols(); ++j) {
    const double d = (coords.col(i) - coords.col(j)).norm();
    if (d < best.distance) best = {d, i, j};
  }
  return best;
}

serial::ClosestPair reduce_pairs(const std::vector<serial::ClosestPair>& rows) {
  serial::ClosestPair best{std::numeric_limits<double>::infinity(), 0, 0};
  for (const auto& r : rows)
    if (r.distance < best.distance) best = r;
  return best;
}

}  // namespace

namespace serial {

Eigen::MatrixXd gram(const Eigen::MatrixXd& coords, const KernelParams& params) {
  const Eigen::Index n = coords.cols();
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      a(i, j) = gram_entry(coords, i, j, params);
      a(j, i) = a(i, j);
    }
  }
  return a;
}

std::vector<double> signed_derivative(const DerivativePoly& poly, std::span<const SignGridPoint> grid, double alpha) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = signed_value(poly, grid[i], alpha);
  return out;
}

std::vector<int> signed_derivative_sign(const DerivativePoly& poly, std::span<const SignGridPoint> grid,
                                        const Rational& alpha) {
  std::vector<int> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = signed_sign(poly, grid[i], alpha);
  return out;
}

Eigen::VectorXd evaluate(const CellGrid& grid, const Eigen::MatrixXd& centers, const Eigen::VectorXd& coefficients,
                         const KernelParams& params, const Eigen::MatrixXd& queries) {
  Eigen::VectorXd out(queries.cols());
  for (Eigen::Index q = 0; q < queries.cols(); ++q)
    out[q] = evaluate_one(grid, centers, coefficients, params, queries.col(q).data());
  return out;
}

Eigen::VectorXd nearest_distance(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& samples) {
  Eigen::VectorXd out(samples.cols());
  for (Eigen::Index s = 0; s < samples.cols(); ++s) out[s] = nearest_one(centers, samples, s);
  return out;
}

ClosestPair closest_pair(const Eigen::MatrixXd& coords) {
  std::vector<ClosestPair> rows;
  rows.reserve(coords.cols());
  for (Eigen::Index i = 0; i < coords.cols(); ++i) rows.push_back(closest_after(coords, i));
  return reduce_pairs(rows);
}

}  // namespace serial

namespace omp {

Eigen::MatrixXd gram(const Eigen::MatrixXd& coords, const KernelParams& params) {
  const Eigen::Index n = coords.cols();
  Eigen::MatrixXd a(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) a(i, j) = gram_entry(coords, i, j, params);
  }
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) a(i, j) = a(j, i);
  }
  return a;
}

std::vector<double> signed_derivative(const DerivativePoly& poly, std::span<const SignGridPoint> grid, double alpha) {
  std::vector<double> out(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = signed_value(poly, grid[i], alpha);
  return out;
}

std::vector<int> signed_derivative_sign(const DerivativePoly& poly, std::span<const SignGridPoint> grid,
                                        const Rational& alpha) {
  std::vector<int> out(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = signed_sign(poly, grid[i], alpha);
  return out;
}

Eigen::VectorXd evaluate(const CellGrid& grid, const Eigen::MatrixXd& centers, const Eigen::VectorXd& coefficients,
                         const KernelParams& params, const Eigen::MatrixXd& queries) {
  Eigen::VectorXd out(queries.cols());
#pragma omp parallel for schedule(dynamic, 256)
  for (Eigen::Index q = 0; q < queries.cols(); ++q)
    out[q] = evaluate_one(grid, centers, coefficients, params, queries.col(q).data());
  return out;
}

Eigen::VectorXd nearest_distance(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& samples) {
  Eigen::VectorXd out(samples.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index s = 0; s < samples.cols(); ++s) out[s] = nearest_one(centers, samples, s);
  return out;
}

serial::ClosestPair closest_pair(const Eigen::MatrixXd& coords) {
  std::vector<serial::ClosestPair> rows(coords.cols());
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < coords.cols(); ++i) rows[i] = closest_after(coords, i);
  return reduce_pairs(rows);
}

}  // namespace omp

}  // namespace csrbf::batch

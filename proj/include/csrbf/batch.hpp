#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// batch::serial and an OpenMP version in batch::omp. Each output element is
// computed by exactly one thread with the same arithmetic as the serial loop, so
// the two agree bit for bit whatever the thread count.

#include "csrbf/cell_grid.hpp"
#include "csrbf/kernel.hpp"
#include "csrbf/symbolic.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace csrbf::batch {

namespace serial {

/// Dense Gram matrix A(i,j) = Phi(x_i - x_j) of the columns of coords.
Eigen::MatrixXd gram(const Eigen::MatrixXd& coords, const KernelParams& params);

/// (-1)^j e^{-alpha u} Q_j(alpha, u) at every grid point.
std::vector<double> signed_derivative(const DerivativePoly& poly, std::span<const SignGridPoint> grid,
                                      double alpha);

/// sign((-1)^j Q_j(alpha, u)) in exact rational arithmetic.
std::vector<int> signed_derivative_sign(const DerivativePoly& poly, std::span<const SignGridPoint> grid,
                                        const Rational& alpha);

/// sum_i c_i Phi(q - x_i) for every query column q, using the cell grid of the
/// centers. Terms are summed in ascending center index.
Eigen::VectorXd evaluate(const CellGrid& grid, const Eigen::MatrixXd& centers,
                         const Eigen::VectorXd& coefficients, const KernelParams& params,
                         const Eigen::MatrixXd& queries);

/// Distance from each sample column to its nearest center (brute force).
Eigen::VectorXd nearest_distance(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& samples);

/// Smallest pairwise distance between columns (+inf for fewer than two), and
/// the first pair attaining it.
struct ClosestPair {
  double distance;
  Eigen::Index first;
  Eigen::Index second;
};
ClosestPair closest_pair(const Eigen::MatrixXd& coords);

}  // namespace serial

namespace omp {

Eigen::MatrixXd gram(const Eigen::MatrixXd& coords, const KernelParams& params);
std::vector<double> signed_derivative(const DerivativePoly& poly, std::span<const SignGridPoint> grid,
                                      double alpha);
std::vector<int> signed_derivative_sign(const DerivativePoly& poly, std::span<const SignGridPoint> grid,
                                        const Rational& alpha);
Eigen::VectorXd evaluate(const CellGrid& grid, const Eigen::MatrixXd& centers,
                         const Eigen::VectorXd& coefficients, const KernelParams& params,
                         const Eigen::MatrixXd& queries);
Eigen::VectorXd nearest_distance(const Eigen::MatrixXd& centers, const Eigen::MatrixXd& samples);
serial::ClosestPair closest_pair(const Eigen::MatrixXd& coords);

}  // namespace omp

}  // namespace csrbf::batch

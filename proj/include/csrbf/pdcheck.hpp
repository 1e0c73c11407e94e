#pragma once

#include "csrbf/kernel.hpp"
#include "csrbf/pointset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace csrbf {

/// Relative slack for "positive": min eigenvalue > -tolerance * e^{-alpha} * N.
inline constexpr double kDefaultPdTolerance = 1e-12;

/// Largest N handled by dense eigen-analysis.
inline constexpr Eigen::Index kDenseLimit = 2000;

/// A(i,j) = Phi(x_i - x_j). Throws std::invalid_argument on dimension mismatch.
Eigen::MatrixXd gram_matrix(const PointSet& points, const KernelParams& params);

/// Observation of one Gram matrix. Never a proof: it records what Cholesky and
/// the symmetric eigensolver saw.
struct PdReport {
  KernelParams params{1.0, 1.0, 1};
  Eigen::Index n = 0;
  std::optional<std::uint64_t> seed;  // point-set seed, when generated
  int trial = 0;

  bool factorization_success = false;
  /// NaN when eigen-analysis was skipped (N > kDenseLimit).
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// max/min eigenvalue; +inf when min <= 0.
  double condition_estimate = 0.0;
  /// Relative tolerance as passed in, and the absolute threshold it implies.
  double tolerance = kDefaultPdTolerance;
  double threshold = 0.0;
  bool eigen_positive = false;
  /// factorization_success && min_eigenvalue > -threshold.
  bool positive = false;

  double elapsed_seconds = 0.0;

  /// Both tests reached the same verdict.
  bool consistent() const { return factorization_success == eigen_positive; }
};

/// Cholesky plus full symmetric eigendecomposition of the Gram matrix.
/// Throws std::invalid_argument on dimension mismatch, negative tolerance or
/// N > kDenseLimit.
PdReport verify_pd(const PointSet& points, const KernelParams& params,
                   double tolerance = kDefaultPdTolerance);

/// Same, for an already assembled Gram matrix.
PdReport verify_pd_matrix(const Eigen::MatrixXd& gram, const KernelParams& params,
                          double tolerance = kDefaultPdTolerance);

struct SweepOptions {
  std::vector<int> dims;
  std::vector<double> alphas;
  int n = 100;
  int trials = 1;
  std::uint64_t seed = 0;
  double delta = 1.0;
  /// Defaults to default_min_separation(d, n) per dimension.
  std::optional<double> min_sep;
  double tolerance = kDefaultPdTolerance;
};

struct SweepCell {
  int dim = 0;
  double alpha = 0.0;
  int trials = 0;
  int passed = 0;
  double worst_min_eigenvalue = 0.0;
};

struct SweepResult {
  /// Ordered by dimension, then alpha, then trial.
  std::vector<PdReport> reports;
  std::vector<SweepCell> cells;

  int passed() const;
};

/// Every (dim, alpha) pair gets `trials` fresh point sets. Cells run in
/// parallel; each trial's seed is derived from (seed, dim, alpha index, trial),
/// so the result does not depend on scheduling. Throws std::invalid_argument
/// for empty lists or non-positive n/trials.
SweepResult pd_sweep(const SweepOptions& options);

}  // namespace csrbf

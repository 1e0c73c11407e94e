#pragma once

#include "csrbf/cell_grid.hpp"
#include "csrbf/kernel.hpp"
#include "csrbf/pdcheck.hpp"
#include "csrbf/pointset.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csrbf {

/// Gram matrix failed to factor; carries the diagnostics of verify_pd.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, PdReport report)
      : std::runtime_error(what), report_(std::move(report)) {}

  const PdReport& report() const { return report_; }

 private:
  PdReport report_;
};

/// Counts work done by one evaluation.
struct EvalStats {
  std::size_t candidates = 0;     // centers returned by the cell grid
  std::size_t contributions = 0;  // centers strictly inside the support
};

/// s(x) = sum_i c_i Phi(x - x_i).
class Interpolant {
 public:
  /// Throws std::invalid_argument when coefficient count or dimensions disagree.
  Interpolant(PointSet centers, Eigen::VectorXd coefficients, KernelParams params,
              double max_residual = 0.0);

  const PointSet& centers() const { return centers_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  const KernelParams& params() const { return params_; }
  const CellGrid& grid() const { return grid_; }
  /// max_i |s(x_i) - f_i| measured right after the fit.
  double max_residual() const { return max_residual_; }

  /// Only centers within delta of x are summed. Throws std::invalid_argument on
  /// dimension mismatch.
  double evaluate(std::span<const double> x, EvalStats* stats = nullptr) const;

  /// Queries are the columns of a dim x M matrix; evaluated in parallel.
  Eigen::VectorXd evaluate_many(const Eigen::MatrixXd& queries) const;

 private:
  PointSet centers_;
  Eigen::VectorXd coefficients_;
  KernelParams params_;
  CellGrid grid_;
  double max_residual_;
};

/// Gram matrix assembled through the cell grid, upper and lower parts stored.
Eigen::SparseMatrix<double> sparse_gram(const PointSet& points, const KernelParams& params);

/// Dense Cholesky up to kDenseLimit centers, sparse Cholesky above. Throws
/// std::invalid_argument on bad shapes or non-finite values, FitError when the
/// Gram matrix is not numerically positive definite.
Interpolant fit(const PointSet& centers, std::span<const double> values, const KernelParams& params);

inline double evaluate(const Interpolant& s, std::span<const double> x) { return s.evaluate(x); }

// ---------------------------------------------------------------------------
// Convergence experiments

using TargetFunction = std::function<double(std::span<const double>)>;

/// "constant" (value 1), "sin" (sin 2 pi x_1), "gaussian" (exp(-10 |x - c|^2),
/// c the cube centre) and "franke" (needs d >= 2, uses x_1, x_2). Throws
/// std::invalid_argument for unknown names.
TargetFunction make_target(const std::string& name, int dim);

struct ConvergenceRow {
  Eigen::Index n = 0;
  double fill_distance = 0.0;
  double sup_error = 0.0;
  double cond_estimate = 0.0;
  /// Empty on success; otherwise why the level has no error value.
  std::string failure;
};

struct ConvergenceOptions {
  int dim = 1;
  std::vector<int> levels;
  std::uint64_t seed = 0;
  /// Multiplies the lattice spacing n^{-1/d} to give each level's min_sep.
  double min_sep_factor = 0.25;
  int fill_samples = 10000;
  /// Monte Carlo evaluation points for d >= 3.
  int mc_samples = 100000;
};

/// Per level: random centers, fit, sup error on a fixed grid (>= 10^4 points
/// for d <= 2, Monte Carlo otherwise), fill distance from random samples and
/// the Gram condition number. A failing level gets NaN entries and a reason;
/// later levels still run. Throws std::invalid_argument unless levels are
/// non-empty and strictly increasing.
std::vector<ConvergenceRow> convergence_experiment(const TargetFunction& target, const KernelParams& params,
                                                   const ConvergenceOptions& options);

/// Points the sup error is measured on.
Eigen::MatrixXd error_evaluation_points(int dim, std::uint64_t seed, int mc_samples = 100000);

/// max over random samples of the distance to the nearest center.
double estimate_fill_distance(const PointSet& centers, int samples, std::uint64_t seed);

}  // namespace csrbf

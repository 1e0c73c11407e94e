#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

namespace csrbf {

/// Thrown when two points of a set coincide.
class DuplicatePointError : public std::invalid_argument {
 public:
  DuplicatePointError(Eigen::Index first, Eigen::Index second);

  Eigen::Index first() const { return first_; }
  Eigen::Index second() const { return second_; }

 private:
  Eigen::Index first_;
  Eigen::Index second_;
};

/// N pairwise distinct points in R^d, stored as the columns of a d x N matrix.
class PointSet {
 public:
  /// Throws std::invalid_argument for dim < 1, a row count different from dim,
  /// or non-finite coordinates, and DuplicatePointError for coincident points.
  PointSet(int dim, Eigen::MatrixXd coords, std::optional<std::uint64_t> seed = std::nullopt);

  int dim() const { return dim_; }
  Eigen::Index size() const { return coords_.cols(); }
  const Eigen::MatrixXd& coords() const { return coords_; }
  std::span<const double> point(Eigen::Index i) const {
    return {coords_.col(i).data(), static_cast<std::size_t>(dim_)};
  }
  std::optional<std::uint64_t> seed() const { return seed_; }

  /// Smallest pairwise distance; +inf for a single point.
  double min_separation() const { return min_separation_; }

  /// Same set with every coordinate multiplied by factor.
  PointSet scaled(double factor) const;

 private:
  int dim_;
  Eigen::MatrixXd coords_;
  std::optional<std::uint64_t> seed_;
  double min_separation_;
};

/// n points uniform in [0,1]^d, each redrawn until it is at least min_sep away
/// from all earlier points. Deterministic for a given seed (mt19937_64 with 53
/// random mantissa bits per coordinate). Throws std::invalid_argument once
/// max_attempts draws in total have been spent (min_sep infeasible).
PointSet random_pointset(int dim, int n, std::uint64_t seed, double min_sep,
                         std::int64_t max_attempts = -1);

/// Separation used when none is given: a quarter of the lattice spacing n^{-1/d}.
double default_min_separation(int dim, int n);

/// Seed for sub-experiment `stream` derived from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace csrbf

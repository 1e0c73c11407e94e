#include "csrbf/pointset.hpp"

#include "csrbf/batch.hpp"

#include <cmath>
#include <random>
#include <string>

namespace csrbf {

DuplicatePointError::DuplicatePointError(Eigen::Index first, Eigen::Index second)
    : std::invalid_argument("duplicate points at indices " + std::to_string(first) + " and " +
                            std::to_string(second)),
      first_(first),
      second_(second) {}

PointSet::PointSet(int dim, Eigen::MatrixXd coords, std::optional<std::uint64_t> seed)
    : dim_(dim), coords_(std::move(coords)), seed_(seed) {
  if (dim < 1) throw std::invalid_argument("point dimension must be >= 1");
  if (coords_.rows() != dim)
    throw std::invalid_argument("coordinate matrix has " + std::to_string(coords_.rows()) + " rows, expected " +
                                std::to_string(dim));
  if (!coords_.allFinite()) throw std::invalid_argument("point coordinates must be finite");
  const auto closest = batch::omp::closest_pair(coords_);
  if (closest.distance == 0.0) throw DuplicatePointError(closest.first, closest.second);
  min_separation_ = closest.distance;
}

PointSet PointSet::scaled(double factor) const { return PointSet(dim_, coords_ * factor, seed_); }

double default_min_separation(int dim, int n) {
  return 0.25 * std::pow(static_cast<double>(n), -1.0 / static_cast<double>(dim));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

PointSet random_pointset(int dim, int n, std::uint64_t seed, double min_sep, std::int64_t max_attempts) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (n < 1) throw std::invalid_argument("point count must be >= 1");
  if (!(min_sep > 0.0)) throw std::invalid_argument("min_sep must be positive");
  if (max_attempts < 0) max_attempts = 1000 * static_cast<std::int64_t>(n) + 1000;

  std::mt19937_64 engine(seed);
  auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };

  Eigen::MatrixXd coords(dim, n);
  std::int64_t attempts = 0;
  for (int i = 0; i < n; ++i) {
    while (true) {
      if (attempts++ >= max_attempts)
        throw std::invalid_argument("could not place " + std::to_string(n) + " points with separation " +
                                 std::to_string(min_sep) + " in [0,1]^" + std::to_string(dim) + " after " +
                                 std::to_string(max_attempts) + " draws");
      for (int k = 0; k < dim; ++k) coords(k, i) = uniform();
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = (coords.col(i) - coords.col(j)).norm() >= min_sep;
      if (ok) break;
    }
  }
  return PointSet(dim, std::move(coords), seed);
}

}  // namespace csrbf

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace csrbf {

/// Uniform bucketing of points (columns of a dim x N matrix) into cubes of side
/// cell_size. Any point within cell_size of a query lies in one of the 3^d cells
/// around the query's cell.
class CellGrid {
 public:
  CellGrid(const Eigen::MatrixXd& coords, double cell_size);

  int dim() const { return dim_; }
  double cell_size() const { return cell_size_; }
  std::size_t occupied_cells() const { return cells_.size(); }
  std::size_t point_count() const { return point_count_; }

  /// Indices of points in the neighborhood of x, sorted ascending. A superset of
  /// all points within cell_size of x.
  std::vector<Eigen::Index> candidates(std::span<const double> x) const;

  /// Every stored index, each exactly once (checks the bucketing).
  std::vector<Eigen::Index> all_indices() const;

 private:
  using Key = std::vector<std::int64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };

  Key key_of(std::span<const double> x) const;

  int dim_;
  double cell_size_;
  std::size_t point_count_;
  std::unordered_map<Key, std::vector<Eigen::Index>, KeyHash> cells_;
};

}  // namespace csrbf

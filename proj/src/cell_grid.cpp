#include "csrbf/cell_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace csrbf {

std::size_t CellGrid::KeyHash::operator()(const Key& key) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::int64_t k : key) {
    h ^= static_cast<std::uint64_t>(k) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

CellGrid::CellGrid(const Eigen::MatrixXd& coords, double cell_size)
    : dim_(static_cast<int>(coords.rows())), cell_size_(cell_size), point_count_(coords.cols()) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell size must be positive");
  for (Eigen::Index i = 0; i < coords.cols(); ++i) {
    cells_[key_of({coords.col(i).data(), static_cast<std::size_t>(dim_)})].push_back(i);
  }
}

CellGrid::Key CellGrid::key_of(std::span<const double> x) const {
  Key key(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) key[k] = static_cast<std::int64_t>(std::floor(x[k] / cell_size_));
  return key;
}

std::vector<Eigen::Index> CellGrid::candidates(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("query dimension mismatch");
  const Key centre = key_of(x);
  std::vector<Eigen::Index> out;

  // Walk the 3^d stencil unless there are fewer occupied cells than that.
  double stencil = 1.0;
  for (int k = 0; k < dim_; ++k) stencil *= 3.0;
  if (stencil <= static_cast<double>(cells_.size())) {
    Key probe(centre);
    std::vector<int> offset(dim_, -1);
    while (true) {
      for (int k = 0; k < dim_; ++k) probe[k] = centre[k] + offset[k];
      if (auto it = cells_.find(probe); it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
      int k = 0;
      while (k < dim_ && offset[k] == 1) offset[k++] = -1;
      if (k == dim_) break;
      ++offset[k];
    }
  } else {
    for (const auto& [key, members] : cells_) {
      bool adjacent = true;
      for (int k = 0; k < dim_ && adjacent; ++k) adjacent = std::abs(key[k] - centre[k]) <= 1;
      if (adjacent) out.insert(out.end(), members.begin(), members.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Eigen::Index> CellGrid::all_indices() const {
  std::vector<Eigen::Index> out;
  out.reserve(point_count_);
  for (const auto& [key, members] : cells_) out.insert(out.end(), members.begin(), members.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace csrbf

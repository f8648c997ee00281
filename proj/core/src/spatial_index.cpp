#include "geoperc/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace geoperc {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

DiscGrid::DiscGrid(std::span<const Disc> discs, const Rect& domain, double cell_size)
    : x0_(domain.x_min()), y0_(domain.y_min()) {
  if (!(cell_size > 0.0)) {
    double sum = 0.0;
    std::size_t positive = 0;
    for (const Disc& d : discs)
      if (d.radius > 0.0) {
        sum += d.radius;
        ++positive;
      }
    cell_size = positive > 0 ? 2.0 * sum / static_cast<double>(positive) : domain.width();
    const double max_cells = 4.0 * static_cast<double>(discs.size()) + 16.0;
    const double min_cell = std::sqrt(domain.area() / max_cells);
    cell_size = std::max(cell_size, min_cell);
  }
  cell_ = cell_size;
  nx_ = std::max(1, static_cast<int>(std::ceil(domain.width() / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(domain.height() / cell_)));

  boxes_.reserve(discs.size());
  std::vector<std::size_t> counts(cell_count() + 1, 0);
  for (const Disc& d : discs) {
    Box b{cell_x(d.center.x - d.radius), cell_x(d.center.x + d.radius),
          cell_y(d.center.y - d.radius), cell_y(d.center.y + d.radius)};
    boxes_.push_back(b);
    for (int j = b.j0; j <= b.j1; ++j)
      for (int i = b.i0; i <= b.i1; ++i) ++counts[static_cast<std::size_t>(j) * nx_ + i + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  offsets_ = counts;
  items_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t k = 0; k < boxes_.size(); ++k) {
    const Box& b = boxes_[k];
    for (int j = b.j0; j <= b.j1; ++j)
      for (int i = b.i0; i <= b.i1; ++i) items_[cursor[static_cast<std::size_t>(j) * nx_ + i]++] = k;
  }
}

int DiscGrid::cell_x(double x) const {
  const double c = std::floor((x - x0_) / cell_);
  return static_cast<int>(std::clamp(c, 0.0, static_cast<double>(nx_ - 1)));
}

int DiscGrid::cell_y(double y) const {
  const double c = std::floor((y - y0_) / cell_);
  return static_cast<int>(std::clamp(c, 0.0, static_cast<double>(ny_ - 1)));
}

}  // namespace geoperc

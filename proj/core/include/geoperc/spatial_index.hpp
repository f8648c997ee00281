#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geoperc/geometry.hpp"

namespace geoperc {

/// Disjoint sets with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x);
  /// Returns false if already joined.
  bool unite(std::size_t a, std::size_t b);
  bool connected(std::size_t a, std::size_t b) { return find(a) == find(b); }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Uniform grid over a domain; each disc is registered in every cell its
/// bounding box (clipped to the domain) overlaps. Mixed radii are handled
/// without an oversized-object list.
class DiscGrid {
 public:
  /// cell_size <= 0 picks twice the mean positive radius, enlarged if needed
  /// to keep the cell count near the disc count.
  DiscGrid(std::span<const Disc> discs, const Rect& domain, double cell_size = 0.0);

  double cell_size() const { return cell_; }
  std::size_t cell_count() const { return static_cast<std::size_t>(nx_) * ny_; }

  /// Calls f(i, j) once for each unordered pair of discs whose clipped
  /// bounding boxes overlap (i < j). Pairs are candidates only.
  template <class F>
  void for_each_candidate_pair(F&& f) const {
    for (int cy = 0; cy < ny_; ++cy)
      for (int cx = 0; cx < nx_; ++cx) {
        const std::size_t c = static_cast<std::size_t>(cy) * nx_ + cx;
        const std::uint32_t* begin = items_.data() + offsets_[c];
        const std::uint32_t* end = items_.data() + offsets_[c + 1];
        for (const std::uint32_t* a = begin; a != end; ++a)
          for (const std::uint32_t* b = a + 1; b != end; ++b) {
            // Report a pair only from the cell where the overlap of the two
            // boxes starts, so every pair is seen once.
            const Box& ba = boxes_[*a];
            const Box& bb = boxes_[*b];
            if (std::max(ba.i0, bb.i0) != cx || std::max(ba.j0, bb.j0) != cy) continue;
            if (ba.i1 < bb.i0 || bb.i1 < ba.i0 || ba.j1 < bb.j0 || bb.j1 < ba.j0) continue;
            f(std::min(*a, *b), std::max(*a, *b));
          }
      }
  }

  /// Calls f(i) for every disc registered in a cell overlapping r (possibly
  /// more than once per disc).
  template <class F>
  void for_each_in_rect(const Rect& r, F&& f) const {
    const int i0 = cell_x(r.x_min()), i1 = cell_x(r.x_max());
    const int j0 = cell_y(r.y_min()), j1 = cell_y(r.y_max());
    for (int cy = j0; cy <= j1; ++cy)
      for (int cx = i0; cx <= i1; ++cx) {
        const std::size_t c = static_cast<std::size_t>(cy) * nx_ + cx;
        for (std::size_t k = offsets_[c]; k < offsets_[c + 1]; ++k) f(items_[k]);
      }
  }

  template <class F>
  void for_each_near(Point2 p, F&& f) const {
    const std::size_t c = static_cast<std::size_t>(cell_y(p.y)) * nx_ + cell_x(p.x);
    for (std::size_t k = offsets_[c]; k < offsets_[c + 1]; ++k) f(items_[k]);
  }

 private:
  struct Box {
    int i0, i1, j0, j1;
  };
  int cell_x(double x) const;
  int cell_y(double y) const;

  double x0_, y0_, cell_;
  int nx_, ny_;
  std::vector<Box> boxes_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> items_;
};

}  // namespace geoperc

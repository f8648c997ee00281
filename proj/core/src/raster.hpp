#pragma once

#include <cstdint>
#include <vector>

namespace geoperc::detail {

/// Row-major boolean raster, nx columns by ny rows.
struct Raster {
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> cells;

  Raster(int nx_, int ny_) : nx(nx_), ny(ny_), cells(static_cast<std::size_t>(nx_) * ny_, 0) {}
  std::uint8_t& at(int i, int j) { return cells[static_cast<std::size_t>(j) * nx + i]; }
  std::uint8_t at(int i, int j) const { return cells[static_cast<std::size_t>(j) * nx + i]; }
};

/// Whether set cells connect column 0 to column nx-1 (4- or 8-connectivity).
inline bool crosses_left_right(const Raster& r, bool eight_connected) {
  std::vector<std::uint8_t> seen(r.cells.size(), 0);
  std::vector<int> stack;
  for (int j = 0; j < r.ny; ++j)
    if (r.at(0, j)) {
      seen[static_cast<std::size_t>(j) * r.nx] = 1;
      stack.push_back(j * r.nx);
    }
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int i = idx % r.nx, j = idx / r.nx;
    if (i == r.nx - 1) return true;
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        if (!eight_connected && di != 0 && dj != 0) continue;
        const int a = i + di, b = j + dj;
        if (a < 0 || b < 0 || a >= r.nx || b >= r.ny) continue;
        const std::size_t k = static_cast<std::size_t>(b) * r.nx + a;
        if (r.cells[k] && !seen[k]) {
          seen[k] = 1;
          stack.push_back(static_cast<int>(k));
        }
      }
  }
  return false;
}

/// Transposed copy, so top-bottom questions reuse crosses_left_right.
inline Raster transposed(const Raster& r) {
  Raster t(r.ny, r.nx);
  for (int j = 0; j < r.ny; ++j)
    for (int i = 0; i < r.nx; ++i) t.at(j, i) = r.at(i, j);
  return t;
}

}  // namespace geoperc::detail

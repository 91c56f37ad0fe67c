#pragma once

#include <array>
#include <cstddef>

#include "mct/grid.hpp"
#include "mct/parallel.hpp"

namespace mct::detail {

/// Neighbour bookkeeping for one row of cells along the last grid axis.
/// minus[k] / plus[k] are the base indices of the rows displaced by -1 / +1
/// along grid axis k, for k < dim - 1.
struct RowStencil {
  std::size_t base = 0;
  std::array<std::size_t, 2> minus{0, 0};
  std::array<std::size_t, 2> plus{0, 0};
};

inline std::size_t row_count(const PeriodicGrid& g) { return g.size() / g.resolution(); }

inline RowStencil row_stencil(const PeriodicGrid& g, std::size_t row) {
  const std::size_t n = g.resolution();
  RowStencil s;
  s.base = row * n;
  if (g.dim() == 2) {
    s.minus[0] = ((row + n - 1) % n) * n;
    s.plus[0] = ((row + 1) % n) * n;
  } else if (g.dim() == 3) {
    const std::size_t i0 = row / n, i1 = row % n;
    s.minus[0] = (((i0 + n - 1) % n) * n + i1) * n;
    s.plus[0] = (((i0 + 1) % n) * n + i1) * n;
    s.minus[1] = (i0 * n + (i1 + n - 1) % n) * n;
    s.plus[1] = (i0 * n + (i1 + 1) % n) * n;
  }
  return s;
}

/// Runs body(row) over all rows in fixed chunks of roughly kBlockSize cells.
template <class F>
void for_each_row(const PeriodicGrid& g, F&& body) {
  const std::size_t rows = row_count(g);
  const std::size_t chunk = std::max<std::size_t>(1, kBlockSize / g.resolution());
  parallel_blocks(
      rows,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) body(r);
      },
      chunk);
}

}  // namespace mct::detail

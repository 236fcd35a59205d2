#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgweno {

enum class BoundaryKind { periodic, zero };

// Axis-aligned computational box, dimension 1..4.
struct DomainBox {
  std::vector<double> lower;
  std::vector<double> upper;

  int dim() const { return static_cast<int>(lower.size()); }

  static DomainBox make(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size() || lo.empty() || lo.size() > 4)
      throw std::invalid_argument("DomainBox: dimension must be 1..4");
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (!(hi[k] > lo[k])) throw std::invalid_argument("DomainBox: upper must exceed lower");
    return DomainBox{std::move(lo), std::move(hi)};
  }

  // [a,b]^d shorthand
  static DomainBox cube(double a, double b, int d) {
    return make(std::vector<double>(d, a), std::vector<double>(d, b));
  }

  bool operator==(const DomainBox&) const = default;
};

// Per-dimension refinement levels relative to the root grid.
struct LevelIndex {
  std::vector<int> levels;

  int dim() const { return static_cast<int>(levels.size()); }
  int sum() const {
    int s = 0;
    for (int l : levels) s += l;
    return s;
  }
  bool operator==(const LevelIndex&) const = default;
  // lexicographic, used for deterministic family ordering
  bool operator<(const LevelIndex& o) const { return levels < o.levels; }
};

// All level indices entering the d-dimensional combination with finest level nl:
// every tuple of nonnegative levels whose sum lies in [max(0, nl-d+1), nl].
// Deterministic lexicographic order.
inline std::vector<LevelIndex> enumerate_combination_levels(int d, int nl) {
  if (d < 1 || d > 4) throw std::invalid_argument("enumerate_combination_levels: d must be 1..4");
  if (nl < d - 1)
    throw std::invalid_argument("enumerate_combination_levels: need N_L >= d-1");
  const int lo_sum = std::max(0, nl - d + 1);
  std::vector<LevelIndex> out;
  std::vector<int> cur(d, 0);
  std::function<void(int, int)> rec = [&](int k, int used) {
    if (k == d - 1) {
      for (int last = std::max(0, lo_sum - used); last + used <= nl; ++last) {
        cur[k] = last;
        if (used + last >= lo_sum) out.push_back(LevelIndex{cur});
      }
      return;
    }
    for (int l = 0; l + used <= nl; ++l) {
      cur[k] = l;
      rec(k + 1, used + l);
    }
  };
  rec(0, 0);
  return out;
}

// One semi-coarsened grid: per-dimension cell counts 2^{l_k} * N_r and
// spacings 2^{-l_k} * H_k. Periodic directions store `cells` points (the
// duplicated endpoint is omitted); zero-boundary directions store cells+1
// points including both endpoints.
struct GridGeometry {
  DomainBox box;
  LevelIndex level;
  std::vector<int> root_cells;
  std::vector<BoundaryKind> boundary;
  std::vector<int> cells;
  std::vector<int> points;
  std::vector<double> spacing;

  int dim() const { return box.dim(); }

  std::size_t total_points() const {
    std::size_t n = 1;
    for (int p : points) n *= static_cast<std::size_t>(p);
    return n;
  }

  // row-major, dimension 0 slowest
  std::vector<std::size_t> strides() const {
    const int d = dim();
    std::vector<std::size_t> s(d, 1);
    for (int k = d - 2; k >= 0; --k) s[k] = s[k + 1] * static_cast<std::size_t>(points[k + 1]);
    return s;
  }

  static GridGeometry make(DomainBox box, LevelIndex level, std::vector<int> root_cells,
                           std::vector<BoundaryKind> boundary) {
    const int d = box.dim();
    if (level.dim() != d || static_cast<int>(root_cells.size()) != d ||
        static_cast<int>(boundary.size()) != d)
      throw std::invalid_argument("GridGeometry: inconsistent dimensions");
    GridGeometry g;
    g.box = std::move(box);
    g.level = std::move(level);
    g.root_cells = std::move(root_cells);
    g.boundary = std::move(boundary);
    g.cells.resize(d);
    g.points.resize(d);
    g.spacing.resize(d);
    for (int k = 0; k < d; ++k) {
      if (g.level.levels[k] < 0) throw std::invalid_argument("GridGeometry: negative level");
      if (g.root_cells[k] < 1) throw std::invalid_argument("GridGeometry: root cells must be >= 1");
      g.cells[k] = g.root_cells[k] << g.level.levels[k];
      g.points[k] = g.cells[k] + (g.boundary[k] == BoundaryKind::zero ? 1 : 0);
      const double rootH = (g.box.upper[k] - g.box.lower[k]) / g.root_cells[k];
      g.spacing[k] = std::ldexp(rootH, -g.level.levels[k]);  // exact halvings of H
    }
    return g;
  }

  bool same_extents(const GridGeometry& o) const { return points == o.points; }
};

inline double grid_point_coordinate_1d(const GridGeometry& g, int dimension, int idx) {
  if (dimension < 0 || dimension >= g.dim() || idx < 0 || idx >= g.points[dimension])
    throw std::out_of_range("grid_point_coordinate: index out of range");
  return g.box.lower[dimension] + idx * g.spacing[dimension];
}

inline std::vector<double> grid_point_coordinate(const GridGeometry& g, std::span<const int> idx) {
  if (static_cast<int>(idx.size()) != g.dim())
    throw std::out_of_range("grid_point_coordinate: wrong index rank");
  std::vector<double> x(g.dim());
  for (int k = 0; k < g.dim(); ++k) x[k] = grid_point_coordinate_1d(g, k, idx[k]);
  return x;
}

// Point values bound to one grid, row-major with dimension 0 slowest.
struct GridField {
  GridGeometry geom;
  std::vector<double> values;

  static GridField zeros(GridGeometry g) {
    GridField f;
    f.values.assign(g.total_points(), 0.0);
    f.geom = std::move(g);
    return f;
  }
};

// Evaluate an analytic function at every grid point.
inline GridField restrict_to_grid(const std::function<double(std::span<const double>)>& f,
                                  const GridGeometry& g) {
  GridField out = GridField::zeros(g);
  const int d = g.dim();
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  for (int k = 0; k < d; ++k) x[k] = g.box.lower[k];
  const std::size_t n = g.total_points();
  for (std::size_t lin = 0; lin < n; ++lin) {
    out.values[lin] = f(x);
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < g.points[k]) {
        x[k] = g.box.lower[k] + idx[k] * g.spacing[k];
        break;
      }
      idx[k] = 0;
      x[k] = g.box.lower[k];
    }
  }
  return out;
}

// Iterate all 1D lines of a d-dimensional array along `dimension`.
// Calls body(base_offset, stride) once per line; line length is points[dimension].
template <class Fn>
void for_each_line(const GridGeometry& g, int dimension, Fn&& body) {
  const auto strides = g.strides();
  const std::size_t stride = strides[dimension];
  const std::size_t npts = static_cast<std::size_t>(g.points[dimension]);
  std::size_t outer = 1, inner = 1;
  for (int k = 0; k < dimension; ++k) outer *= static_cast<std::size_t>(g.points[k]);
  for (int k = dimension + 1; k < g.dim(); ++k) inner *= static_cast<std::size_t>(g.points[k]);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) body(o * npts * stride + i, stride);
}

inline std::size_t line_count(const GridGeometry& g, int dimension) {
  return g.total_points() / static_cast<std::size_t>(g.points[dimension]);
}

// base offset + stride of the line with flat index `which` (same order as for_each_line)
inline std::pair<std::size_t, std::size_t> line_at(const GridGeometry& g, int dimension,
                                                   std::size_t which) {
  const auto strides = g.strides();
  const std::size_t stride = strides[dimension];
  const std::size_t npts = static_cast<std::size_t>(g.points[dimension]);
  std::size_t inner = 1;
  for (int k = dimension + 1; k < g.dim(); ++k) inner *= static_cast<std::size_t>(g.points[k]);
  const std::size_t o = which / inner;
  const std::size_t i = which % inner;
  return {o * npts * stride + i, stride};
}

}  // namespace sgweno

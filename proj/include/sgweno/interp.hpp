#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sgweno/grid.hpp"
#include "sgweno/parallel.hpp"
#include "sgweno/weno.hpp"

namespace sgweno {

enum class InterpMode { lagrange, weno };

// Five point values around x_i, the uniform spacing, and the target offset
// xi = (x - x_i)/h restricted to [-1/2, 1/2).
struct InterpStencil {
  std::array<double, 5> u;
  double h;
  double xi;
};

namespace detail {
inline void check_offset(double xi) {
  if (!(xi >= -0.5 && xi < 0.5))
    throw std::out_of_range("interp: offset must lie in [-1/2, 1/2)");
}
}  // namespace detail

// Location-dependent positive linear weights C_k(x) of the three quadratic
// substencil interpolants; they sum to 1 and recover the degree-4 Lagrange
// interpolant on the big stencil.
inline std::array<double, 3> linear_interp_weights(double xi) {
  detail::check_offset(xi);
  const double t = xi;
  return {(t - 1.0) * (t - 2.0) / 12.0, (4.0 - t * t) / 6.0, (t + 2.0) * (t + 1.0) / 12.0};
}

namespace detail {

// quadratic interpolants of the substencils evaluated at offset t from x_i
inline std::array<double, 3> substencil_values(const std::array<double, 5>& u, double t) {
  const double p0 = u[0] * 0.5 * (t + 1.0) * t - u[1] * (t + 2.0) * t +
                    u[2] * 0.5 * (t + 2.0) * (t + 1.0);
  const double p1 = u[1] * 0.5 * t * (t - 1.0) - u[2] * (t + 1.0) * (t - 1.0) +
                    u[3] * 0.5 * (t + 1.0) * t;
  const double p2 = u[2] * 0.5 * (t - 1.0) * (t - 2.0) - u[3] * t * (t - 2.0) +
                    u[4] * 0.5 * t * (t - 1.0);
  return {p0, p1, p2};
}

}  // namespace detail

// Degree-4 interpolation of the five stencil values at the offset point,
// assembled as sum_k C_k(x) P_k(x).
inline double lagrange_interp5(const InterpStencil& s) {
  if (!(s.h > 0.0)) throw std::invalid_argument("lagrange_interp5: h must be positive");
  const auto c = linear_interp_weights(s.xi);
  const auto p = detail::substencil_values(s.u, s.xi);
  return c[0] * p[0] + c[1] * p[1] + c[2] * p[2];
}

// Smoothness indicators of the interpolating quadratics P_k over
// [x_{i-1/2}, x_{i+1/2}]: the closed form coincides with the flux-side
// indicators applied to the substencil point values.
inline std::array<double, 3> interp_smoothness_indicators(const std::array<double, 5>& u) {
  return smoothness_indicators(u);
}

// Nonlinear interpolation weights w_k(x): C_k(x)/(eps+beta_k)^2, normalized.
inline std::array<double, 3> weno_interp_weights(const std::array<double, 5>& u, double xi,
                                                 double epsilon) {
  const auto c = linear_interp_weights(xi);
  const auto b = interp_smoothness_indicators(u);
  const double a0 = c[0] / detail::sqr(epsilon + b[0]);
  const double a1 = c[1] / detail::sqr(epsilon + b[1]);
  const double a2 = c[2] / detail::sqr(epsilon + b[2]);
  const double sum = a0 + a1 + a2;
  return {a0 / sum, a1 / sum, a2 / sum};
}

// WENO variant: the linear weights C_k(x) are replaced by nonlinear weights
// built from the smoothness indicators.
inline double weno_interp5(const InterpStencil& s, double epsilon) {
  if (!(s.h > 0.0)) throw std::invalid_argument("weno_interp5: h must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("weno_interp5: epsilon must be positive");
  const auto c = linear_interp_weights(s.xi);
  const auto b = interp_smoothness_indicators(s.u);
  const double a0 = c[0] / detail::sqr(epsilon + b[0]);
  const double a1 = c[1] / detail::sqr(epsilon + b[1]);
  const double a2 = c[2] / detail::sqr(epsilon + b[2]);
  const auto p = detail::substencil_values(s.u, s.xi);
  return (a0 * p[0] + a1 * p[1] + a2 * p[2]) / (a0 + a1 + a2);
}

namespace detail {

// Per-offset data for dyadic upsampling by 2^m; offsets depend only on
// r = j mod 2^m. The two modes anchor their stencils differently:
//   - WENO interpolation centers the stencil on the nearest source point,
//     i = (j + 2^{m-1}) >> m, so the offset stays in [-1/2, 1/2) where the
//     linear weights C_k are the documented positive central-interval ones.
//   - Lagrange interpolation anchors on the enclosing cell, i = j >> m with
//     t = r/2^m in [0, 1); C_k remain positive there and the combination is
//     still the degree-4 interpolant of the cell's five-point stencil.
struct OffsetTable {
  int m = 0;
  struct Entry {
    bool copy = false;
    int di = 0;        // i = (j >> m) + di
    double t = 0.0;
    std::array<double, 3> c{};  // linear weights C_k(t)
  };
  std::vector<Entry> entries;  // size 2^m

  static std::array<double, 3> cell_weights(double t) {
    return {(t - 1.0) * (t - 2.0) / 12.0, (4.0 - t * t) / 6.0,
            (t + 2.0) * (t + 1.0) / 12.0};
  }

  static OffsetTable make(int m, InterpMode mode) {
    OffsetTable tab;
    tab.m = m;
    const int f = 1 << m;
    tab.entries.resize(f);
    for (int r = 0; r < f; ++r) {
      auto& e = tab.entries[r];
      if (r == 0) {
        e.copy = true;
        continue;
      }
      if (mode == InterpMode::weno) {
        e.di = (r >= f / 2) ? 1 : 0;
        e.t = static_cast<double>(r) / f - e.di;
        e.c = linear_interp_weights(e.t);
      } else {
        e.di = 0;
        e.t = static_cast<double>(r) / f;
        e.c = cell_weights(e.t);
      }
    }
    return tab;
  }
};

// Upsample one line from n_src to the refined point count. Source values are
// gathered with wraparound (periodic) or constant-zero extension (zero BC).
inline void upsample_line(std::span<const double> src, std::span<double> dst,
                          const OffsetTable& tab, BoundaryKind bc, InterpMode mode,
                          double epsilon) {
  const int m = tab.m;
  const int f = 1 << m;
  const int n_src = static_cast<int>(src.size());
  const int n_dst = static_cast<int>(dst.size());

  auto src_at = [&](int i) -> double {
    if (bc == BoundaryKind::periodic) return src[((i % n_src) + n_src) % n_src];
    return (i >= 0 && i < n_src) ? src[i] : 0.0;
  };

  int cached_i = INT32_MIN;
  std::array<double, 5> stencil{};
  std::array<double, 3> beta{};
  for (int j = 0; j < n_dst; ++j) {
    const auto& e = tab.entries[j & (f - 1)];
    if (e.copy) {
      dst[j] = src[(j >> m) % n_src];  // nodal values pass through unchanged
      continue;
    }
    const int i = (j >> m) + e.di;
    if (i != cached_i) {
      cached_i = i;
      for (int s = 0; s < 5; ++s) stencil[s] = src_at(i - 2 + s);
      if (mode == InterpMode::weno) beta = interp_smoothness_indicators(stencil);
    }
    const auto p = substencil_values(stencil, e.t);
    if (mode == InterpMode::lagrange) {
      dst[j] = e.c[0] * p[0] + e.c[1] * p[1] + e.c[2] * p[2];
    } else {
      const double a0 = e.c[0] / sqr(epsilon + beta[0]);
      const double a1 = e.c[1] / sqr(epsilon + beta[1]);
      const double a2 = e.c[2] / sqr(epsilon + beta[2]);
      dst[j] = (a0 * p[0] + a1 * p[1] + a2 * p[2]) / (a0 + a1 + a2);
    }
  }
}

}  // namespace detail

// Prolongation onto the finest grid: every grid line along each direction in
// turn is upsampled from 2^{l_k} N_r to 2^{N_L} N_r points by evaluating the
// five-point interpolant of the enclosing source interval at each new point.
// Direction order is fixed (dimension 0 first) for reproducibility.
inline GridField prolong(const GridField& u, int finest_level, InterpMode mode, double epsilon,
                         int threads = 1) {
  const GridGeometry& g = u.geom;
  const int d = g.dim();
  for (int k = 0; k < d; ++k)
    if (g.level.levels[k] > finest_level)
      throw std::invalid_argument("prolong: source level exceeds target level");

  GridGeometry target = GridGeometry::make(
      g.box, LevelIndex{std::vector<int>(d, finest_level)}, g.root_cells, g.boundary);

  if (g.level.sum() == d * finest_level) {
    GridField out;
    out.geom = target;
    out.values = u.values;  // identity prolongation
    return out;
  }

  std::vector<int> extents(g.points.begin(), g.points.end());
  std::vector<double> cur = u.values;
  for (int k = 0; k < d; ++k) {
    const int m = finest_level - g.level.levels[k];
    if (m == 0) continue;
    const auto tab = detail::OffsetTable::make(m, mode);
    const int n_src = extents[k];
    const int n_dst = target.points[k];

    std::size_t outer = 1, inner = 1;
    for (int q = 0; q < k; ++q) outer *= static_cast<std::size_t>(extents[q]);
    for (int q = k + 1; q < d; ++q) inner *= static_cast<std::size_t>(extents[q]);

    std::vector<double> next(outer * static_cast<std::size_t>(n_dst) * inner);
    const std::size_t nlines = outer * inner;
    parallel_for(nlines, threads, [&](std::size_t line) {
      static thread_local std::vector<double> sbuf, dbuf;
      sbuf.resize(n_src);
      dbuf.resize(n_dst);
      const std::size_t o = line / inner;
      const std::size_t in = line % inner;
      const double* sp = cur.data() + (o * static_cast<std::size_t>(n_src)) * inner + in;
      for (int j = 0; j < n_src; ++j) sbuf[j] = sp[static_cast<std::size_t>(j) * inner];
      detail::upsample_line(sbuf, dbuf, tab, g.boundary[k], mode, epsilon);
      double* dp = next.data() + (o * static_cast<std::size_t>(n_dst)) * inner + in;
      for (int j = 0; j < n_dst; ++j) dp[static_cast<std::size_t>(j) * inner] = dbuf[j];
    });
    cur.swap(next);
    extents[k] = n_dst;
  }

  GridField out;
  out.geom = std::move(target);
  out.values = std::move(cur);
  return out;
}

// Variant validating compatibility with an explicit target geometry.
inline GridField prolong(const GridField& u, const GridGeometry& target, InterpMode mode,
                         double epsilon, int threads = 1) {
  const int d = u.geom.dim();
  if (target.dim() != d || !(target.box == u.geom.box) ||
      target.root_cells != u.geom.root_cells || target.boundary != u.geom.boundary)
    throw std::invalid_argument("prolong: incompatible domain boxes");
  int nl = target.level.levels.empty() ? 0 : target.level.levels[0];
  for (int k = 0; k < d; ++k)
    if (target.level.levels[k] != nl)
      throw std::invalid_argument("prolong: target must be the isotropic finest grid");
  return prolong(u, nl, mode, epsilon, threads);
}

}  // namespace sgweno

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "sgweno/grid.hpp"

namespace sgweno {

// Flux values on the five-point big stencil (f_{i-2}, ..., f_{i+2}).
using StencilValues5 = std::array<double, 5>;

enum class WenoMode { nonlinear, linear };

struct WenoParams {
  double epsilon = 1e-6;
  WenoMode mode = WenoMode::nonlinear;
};

// Ideal weights of the three candidate fluxes.
inline constexpr double kLinearWeight0 = 0.1;
inline constexpr double kLinearWeight1 = 0.6;
inline constexpr double kLinearWeight2 = 0.3;

namespace detail {
inline constexpr double kSixth = 1.0 / 6.0;

inline double sqr(double x) { return x * x; }
}  // namespace detail

// Jiang-Shu smoothness indicators of the three substencils.
inline std::array<double, 3> smoothness_indicators(const StencilValues5& s) {
  using detail::sqr;
  const double b0 = (13.0 / 12.0) * sqr(s[0] - 2.0 * s[1] + s[2]) +
                    0.25 * sqr(s[0] - 4.0 * s[1] + 3.0 * s[2]);
  const double b1 = (13.0 / 12.0) * sqr(s[1] - 2.0 * s[2] + s[3]) + 0.25 * sqr(s[1] - s[3]);
  const double b2 = (13.0 / 12.0) * sqr(s[2] - 2.0 * s[3] + s[4]) +
                    0.25 * sqr(3.0 * s[2] - 4.0 * s[3] + s[4]);
  return {b0, b1, b2};
}

// Normalized weights of the three candidate fluxes.
inline std::array<double, 3> weno5_weights(const StencilValues5& s, const WenoParams& p) {
  if (p.mode == WenoMode::linear) return {kLinearWeight0, kLinearWeight1, kLinearWeight2};
  const auto b = smoothness_indicators(s);
  const double a0 = kLinearWeight0 / detail::sqr(p.epsilon + b[0]);
  const double a1 = kLinearWeight1 / detail::sqr(p.epsilon + b[1]);
  const double a2 = kLinearWeight2 / detail::sqr(p.epsilon + b[2]);
  const double sum = a0 + a1 + a2;
  return {a0 / sum, a1 / sum, a2 / sum};
}

// Positive-wind reconstruction of the numerical flux at x_{i+1/2} from
// (f_{i-2}, ..., f_{i+2}): convex combination of the three third-order
// candidate fluxes with nonlinear (or, in linear mode, ideal) weights.
inline double weno5_flux_positive(const StencilValues5& s, const WenoParams& p) {
  using detail::kSixth;
  const double c0 = kSixth * (2.0 * s[0] - 7.0 * s[1] + 11.0 * s[2]);
  const double c1 = kSixth * (-s[1] + 5.0 * s[2] + 2.0 * s[3]);
  const double c2 = kSixth * (2.0 * s[2] + 5.0 * s[3] - s[4]);
  if (p.mode == WenoMode::linear)
    return kLinearWeight0 * c0 + kLinearWeight1 * c1 + kLinearWeight2 * c2;
  const auto b = smoothness_indicators(s);
  const double a0 = kLinearWeight0 / detail::sqr(p.epsilon + b[0]);
  const double a1 = kLinearWeight1 / detail::sqr(p.epsilon + b[1]);
  const double a2 = kLinearWeight2 / detail::sqr(p.epsilon + b[2]);
  return (a0 * c0 + a1 * c1 + a2 * c2) / (a0 + a1 + a2);
}

// Negative-wind reconstruction at x_{i+1/2} from the right-biased values in
// grid order (f_{i-1}, f_i, f_{i+1}, f_{i+2}, f_{i+3}). The formulas are the
// mirror image of the positive case about x_{i+1/2}, so this is the positive
// reconstruction of the reversed stencil.
inline double weno5_flux_negative(const StencilValues5& s, const WenoParams& p) {
  return weno5_flux_positive({s[4], s[3], s[2], s[1], s[0]}, p);
}

// f = f_plus + f_minus with f_plus = (f + alpha*u)/2 carrying the positive
// wind and f_minus the negative wind. f_minus is formed as f - f_plus so the
// two parts recombine to f.
inline std::pair<double, double> lax_friedrichs_split(double f, double u, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("lax_friedrichs_split: alpha must be >= 0");
  const double fp = 0.5 * (f + alpha * u);
  return {fp, f - fp};
}

namespace detail {

// reconstruction from a pointer window: g[0..4] = f_{i-2..i+2}
inline double flux_pos5(const double* g, const WenoParams& p) {
  return weno5_flux_positive({g[0], g[1], g[2], g[3], g[4]}, p);
}

// g[0..4] = f_{i-1..i+3}
inline double flux_neg5(const double* g, const WenoParams& p) {
  return weno5_flux_negative({g[0], g[1], g[2], g[3], g[4]}, p);
}

struct LineWorkspace {
  std::vector<double> fp, fm, fhat;
};

inline LineWorkspace& line_workspace() {
  static thread_local LineWorkspace ws;
  return ws;
}

}  // namespace detail

// d/dx of the flux along one uniform grid line by the conservative flux
// difference (fhat_{i+1/2} - fhat_{i-1/2})/dx, with Lax-Friedrichs splitting
// and upwinded WENO5 reconstruction of each part. Periodic lines wrap;
// zero-boundary lines see three constant-zero ghost points per side.
template <class Flux>
void weno_derivative_line(std::span<const double> u, Flux&& flux, double alpha, double dx,
                          BoundaryKind bc, const WenoParams& p, std::span<double> out) {
  const int n = static_cast<int>(u.size());
  if (bc == BoundaryKind::periodic && n < 6)
    throw std::invalid_argument("weno_derivative_line: periodic line too short");
  if (n < 1 || static_cast<int>(out.size()) != n)
    throw std::invalid_argument("weno_derivative_line: bad extents");

  auto& ws = detail::line_workspace();
  ws.fp.resize(n + 6);
  ws.fm.resize(n + 6);
  // split fluxes on the padded range [-3, n+3)
  for (int j = -3; j < n + 3; ++j) {
    double uj;
    if (bc == BoundaryKind::periodic)
      uj = u[((j % n) + n) % n];
    else
      uj = (j >= 0 && j < n) ? u[j] : 0.0;
    const double f = flux(uj);
    const double fpj = 0.5 * (f + alpha * uj);
    ws.fp[j + 3] = fpj;
    ws.fm[j + 3] = f - fpj;
  }

  if (bc == BoundaryKind::periodic) {
    ws.fhat.resize(n);
    for (int k = 0; k < n; ++k)
      ws.fhat[k] = detail::flux_pos5(&ws.fp[k + 1], p) + detail::flux_neg5(&ws.fm[k + 2], p);
    for (int i = 0; i < n; ++i) out[i] = (ws.fhat[i] - ws.fhat[(i + n - 1) % n]) / dx;
  } else {
    ws.fhat.resize(n + 1);  // interfaces -1/2 .. n-1/2
    for (int k = -1; k < n; ++k)
      ws.fhat[k + 1] = detail::flux_pos5(&ws.fp[k + 1], p) + detail::flux_neg5(&ws.fm[k + 2], p);
    for (int i = 0; i < n; ++i) out[i] = (ws.fhat[i + 1] - ws.fhat[i]) / dx;
  }
}

// d/dx of c*u for a coefficient c that is constant along the line. With
// alpha = |c| one split part vanishes identically, so only the upwind
// reconstruction is evaluated; the result is bitwise identical to the general
// kernel with flux(u) = c*u and alpha = |c|.
inline void advect_derivative_line(std::span<const double> u, double c, double dx,
                                   BoundaryKind bc, const WenoParams& p, std::span<double> out) {
  const int n = static_cast<int>(u.size());
  if (bc == BoundaryKind::periodic && n < 6)
    throw std::invalid_argument("advect_derivative_line: periodic line too short");
  if (n < 1 || static_cast<int>(out.size()) != n)
    throw std::invalid_argument("advect_derivative_line: bad extents");

  auto& ws = detail::line_workspace();
  ws.fp.resize(n + 6);
  for (int j = -3; j < n + 3; ++j) {
    double uj;
    if (bc == BoundaryKind::periodic)
      uj = u[((j % n) + n) % n];
    else
      uj = (j >= 0 && j < n) ? u[j] : 0.0;
    ws.fp[j + 3] = c * uj;
  }
  const bool downwind = (c < 0.0);
  if (bc == BoundaryKind::periodic) {
    ws.fhat.resize(n);
    for (int k = 0; k < n; ++k)
      ws.fhat[k] = downwind ? detail::flux_neg5(&ws.fp[k + 2], p)
                            : detail::flux_pos5(&ws.fp[k + 1], p);
    for (int i = 0; i < n; ++i) out[i] = (ws.fhat[i] - ws.fhat[(i + n - 1) % n]) / dx;
  } else {
    ws.fhat.resize(n + 1);
    for (int k = -1; k < n; ++k)
      ws.fhat[k + 1] = downwind ? detail::flux_neg5(&ws.fp[k + 2], p)
                                : detail::flux_pos5(&ws.fp[k + 1], p);
    for (int i = 0; i < n; ++i) out[i] = (ws.fhat[i + 1] - ws.fhat[i]) / dx;
  }
}

}  // namespace sgweno

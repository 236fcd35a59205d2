#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "sgweno/combine.hpp"
#include "sgweno/grid.hpp"
#include "sgweno/parallel.hpp"
#include "sgweno/timestep.hpp"
#include "sgweno/weno.hpp"

namespace sgweno {

enum class ModelKind { advection, burgers, vlasov_boltzmann, vlasov_maxwell };

// Scalar conservation law u_t + sum_k f_k(u)_x_k = 0 with either linear
// fluxes a_k u or the Burgers flux u^2/2 in every direction.
struct ScalarConservationLaw {
  ModelKind kind = ModelKind::advection;
  std::vector<double> speeds;  // advection only

  double flux(int dir, double u) const {
    return kind == ModelKind::advection ? speeds[dir] * u : 0.5 * u * u;
  }
  double flux_derivative(int dir, double u) const {
    return kind == ModelKind::advection ? speeds[dir] : u;
  }
};

// Relaxation model f_t + v.grad_x f + E(x).grad_v f = (mu_inf rho - f)/tau
// with the prescribed potential Phi = |x|^2/2, so E(x) = -x.
struct VlasovBoltzmannSpec {
  int space_dim = 1;  // d; the phase-space grid has 2d dimensions
  double theta = 1.0;
  double tau = 1.0;
};

struct VlasovMaxwellSpec {
  double beta = 0.01;
  double b = 0.001;
  double delta = 0.5;
  double v01 = 0.3;
  double v02 = 0.3;
  double k0 = 0.2;
};

// Field lines over the x2 grid of one semi-coarsened grid.
struct MaxwellFieldState {
  std::vector<double> e1, e2, b3;
};

// ---------------------------------------------------------------------------
// quadrature
// ---------------------------------------------------------------------------

// Composite trapezoidal weights along one dimension: h everywhere on periodic
// grids (no duplicated endpoint), h/2 at both endpoints on zero-boundary
// grids.
inline std::vector<double> trapezoid_weights_1d(const GridGeometry& g, int k) {
  std::vector<double> w(g.points[k], g.spacing[k]);
  if (g.boundary[k] == BoundaryKind::zero) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

inline double quadrature_mass(const GridField& f) {
  const int d = f.geom.dim();
  std::vector<std::vector<double>> w(d);
  for (int k = 0; k < d; ++k) w[k] = trapezoid_weights_1d(f.geom, k);
  std::vector<int> idx(d, 0);
  // compensated summation keeps the discrete mass reproducible to ~1 ulp
  double sum = 0.0, comp = 0.0;
  const std::size_t n = f.geom.total_points();
  for (std::size_t lin = 0; lin < n; ++lin) {
    double wp = 1.0;
    for (int k = 0; k < d; ++k) wp *= w[k][idx[k]];
    const double term = wp * f.values[lin] - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < f.geom.points[k]) break;
      idx[k] = 0;
    }
  }
  return sum;
}

// Rescale so the field integrates to exactly 1 under the same rule.
inline GridField normalize_initial(GridField f) {
  const double mass = quadrature_mass(f);
  if (!(mass > 0.0)) throw std::domain_error("normalize_initial: nonpositive mass");
  for (double& v : f.values) v /= mass;
  return f;
}

// ---------------------------------------------------------------------------
// per-direction sweeps
// ---------------------------------------------------------------------------

namespace detail {

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// index of dimension `query` encoded in the flat line index of lines along
// `line_dim` (see line_at ordering)
struct IndexExtractor {
  std::size_t divisor = 1;
  int modulus = 1;
  int operator()(std::size_t which) const {
    return static_cast<int>((which / divisor) % static_cast<std::size_t>(modulus));
  }
  static IndexExtractor make(const GridGeometry& g, int line_dim, int query_dim) {
    IndexExtractor e;
    e.modulus = g.points[query_dim];
    for (int r = query_dim + 1; r < g.dim(); ++r)
      if (r != line_dim) e.divisor *= static_cast<std::size_t>(g.points[r]);
    return e;
  }
};

struct SweepBuffers {
  std::vector<double> u, du;
};
inline SweepBuffers& sweep_buffers() {
  static thread_local SweepBuffers b;
  return b;
}

// out -= d/dx_k of flux(u), split with the given alpha
template <class Flux>
void flux_sweep(const GridGeometry& g, int k, std::span<const double> state, Flux&& flux,
                double alpha, const WenoParams& p, int threads, std::span<double> out) {
  const int n = g.points[k];
  const double h = g.spacing[k];
  const BoundaryKind bc = g.boundary[k];
  parallel_for(line_count(g, k), threads, [&](std::size_t which) {
    auto [base, stride] = line_at(g, k, which);
    auto& buf = sweep_buffers();
    buf.u.resize(n);
    buf.du.resize(n);
    for (int j = 0; j < n; ++j) buf.u[j] = state[base + static_cast<std::size_t>(j) * stride];
    weno_derivative_line(buf.u, flux, alpha, h, bc, p, buf.du);
    for (int j = 0; j < n; ++j) out[base + static_cast<std::size_t>(j) * stride] -= buf.du[j];
  });
}

// out -= d/dx_k of (c * u) where c is constant along each line
template <class CoefFn>
void advective_sweep(const GridGeometry& g, int k, std::span<const double> state,
                     const WenoParams& p, int threads, CoefFn&& coef_of_line,
                     std::span<double> out) {
  const int n = g.points[k];
  const double h = g.spacing[k];
  const BoundaryKind bc = g.boundary[k];
  parallel_for(line_count(g, k), threads, [&](std::size_t which) {
    auto [base, stride] = line_at(g, k, which);
    const double c = coef_of_line(which);
    auto& buf = sweep_buffers();
    buf.u.resize(n);
    buf.du.resize(n);
    for (int j = 0; j < n; ++j) buf.u[j] = state[base + static_cast<std::size_t>(j) * stride];
    advect_derivative_line(buf.u, c, h, bc, p, buf.du);
    for (int j = 0; j < n; ++j) out[base + static_cast<std::size_t>(j) * stride] -= buf.du[j];
  });
}

}  // namespace detail

// Dimension-by-dimension WENO right-hand side of a scalar conservation law:
// tendency = -sum_k d/dx_k f_k(u), with per-direction Lax-Friedrichs
// alpha_k = max over the grid of |f_k'(u)|.
inline void conservation_law_rhs_into(const GridGeometry& g, std::span<const double> state,
                                      const ScalarConservationLaw& law, const WenoParams& p,
                                      int threads, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double umax = law.kind == ModelKind::burgers ? detail::max_abs(state) : 0.0;
  for (int k = 0; k < g.dim(); ++k) {
    if (law.kind == ModelKind::advection) {
      const double a = law.speeds[k];
      detail::advective_sweep(g, k, state, p, threads, [a](std::size_t) { return a; }, out);
    } else {
      detail::flux_sweep(g, k, state, [](double u) { return 0.5 * u * u; }, umax, p, threads,
                         out);
    }
  }
}

inline GridField conservation_law_rhs(const GridField& u, const ScalarConservationLaw& law,
                                      const WenoParams& p, int threads = 1) {
  GridField out = GridField::zeros(u.geom);
  conservation_law_rhs_into(u.geom, u.values, law, p, threads, out.values);
  return out;
}

// ---------------------------------------------------------------------------
// Vlasov-Boltzmann relaxation model
// ---------------------------------------------------------------------------

// The absolute Maxwellian mu_inf(v) = exp(-|v|^2/(2 theta)) / (2 pi theta)^{d/2}
// restricted to the velocity grid.
inline GridField maxwellian(const GridGeometry& vgeom, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("maxwellian: theta must be positive");
  const int dv = vgeom.dim();
  const double norm = std::pow(2.0 * std::numbers::pi * theta, 0.5 * dv);
  return restrict_to_grid(
      [&](std::span<const double> v) {
        double s = 0.0;
        for (double c : v) s += c * c;
        return std::exp(-s / (2.0 * theta)) / norm;
      },
      vgeom);
}

// sub-geometry spanning dimensions [lo, hi) of g
inline GridGeometry subgeometry(const GridGeometry& g, int lo, int hi) {
  auto slice = [&](auto const& v) {
    return std::vector<typename std::decay_t<decltype(v)>::value_type>(v.begin() + lo,
                                                                       v.begin() + hi);
  };
  return GridGeometry::make(DomainBox{slice(g.box.lower), slice(g.box.upper)},
                            LevelIndex{slice(g.level.levels)}, slice(g.root_cells),
                            slice(g.boundary));
}

namespace detail {

// flattened product-trapezoid weights over dimensions [lo, hi)
inline std::vector<double> block_weights(const GridGeometry& g, int lo, int hi) {
  std::vector<std::vector<double>> w1;
  for (int k = lo; k < hi; ++k) w1.push_back(trapezoid_weights_1d(g, k));
  std::size_t n = 1;
  for (auto& w : w1) n *= w.size();
  std::vector<double> out(n);
  std::vector<int> idx(w1.size(), 0);
  for (std::size_t lin = 0; lin < n; ++lin) {
    double p = 1.0;
    for (std::size_t k = 0; k < w1.size(); ++k) p *= w1[k][idx[k]];
    out[lin] = p;
    for (int k = static_cast<int>(w1.size()) - 1; k >= 0; --k) {
      if (++idx[k] < static_cast<int>(w1[k].size())) break;
      idx[k] = 0;
    }
  }
  return out;
}

}  // namespace detail

// Precomputed per-grid data for the relaxation model. The discrete Maxwellian
// is rescaled so its trapezoidal mass is exactly 1, which makes the relaxation
// operator mass-conserving under the same quadrature.
struct VbWorkspace {
  int space_dim = 0;
  std::size_t vel_size = 1;                  // points in the velocity block
  std::vector<double> vweights;              // velocity quadrature weights
  std::vector<double> mu_norm;               // renormalized discrete mu_inf
  std::vector<std::vector<double>> coords;   // coords[k][i] for every grid dim

  static VbWorkspace make(const GridGeometry& g, const VlasovBoltzmannSpec& spec) {
    const int dx = spec.space_dim;
    if (g.dim() != 2 * dx)
      throw std::invalid_argument("VbWorkspace: grid rank must be twice the space dimension");
    VbWorkspace ws;
    ws.space_dim = dx;
    ws.vweights = detail::block_weights(g, dx, 2 * dx);
    GridField mu = maxwellian(subgeometry(g, dx, 2 * dx), spec.theta);
    double mass = 0.0;
    for (std::size_t i = 0; i < mu.values.size(); ++i) mass += ws.vweights[i] * mu.values[i];
    ws.mu_norm = std::move(mu.values);
    for (double& v : ws.mu_norm) v /= mass;
    ws.vel_size = ws.mu_norm.size();
    ws.coords.resize(g.dim());
    for (int k = 0; k < g.dim(); ++k) {
      ws.coords[k].resize(g.points[k]);
      for (int i = 0; i < g.points[k]; ++i) ws.coords[k][i] = grid_point_coordinate_1d(g, k, i);
    }
    return ws;
  }
};

// Macroscopic density rho(x) = integral of f over the velocity block.
inline GridField moment_density(const GridField& f, const VlasovBoltzmannSpec& spec) {
  const int dx = spec.space_dim;
  const auto vw = detail::block_weights(f.geom, dx, 2 * dx);
  GridField rho = GridField::zeros(subgeometry(f.geom, 0, dx));
  const std::size_t vn = vw.size();
  for (std::size_t s = 0; s < rho.values.size(); ++s) {
    double acc = 0.0;
    const double* block = f.values.data() + s * vn;
    for (std::size_t i = 0; i < vn; ++i) acc += vw[i] * block[i];
    rho.values[s] = acc;
  }
  return rho;
}

// Unique stationary state M(x,v) of the relaxation model on the truncated
// box; the x-normalization integral uses the same trapezoidal rule.
inline GridField stationary_state(const VlasovBoltzmannSpec& spec, const GridGeometry& g) {
  const int dx = spec.space_dim;
  const double theta = spec.theta;
  GridField zx = restrict_to_grid(
      [&](std::span<const double> x) {
        double phi = 0.0;
        for (double c : x) phi += 0.5 * c * c;
        return std::exp(-phi / theta);
      },
      subgeometry(g, 0, dx));
  const double z = quadrature_mass(zx);
  const double norm = std::pow(2.0 * std::numbers::pi * theta, 0.5 * dx) * z;
  return restrict_to_grid(
      [&](std::span<const double> xv) {
        double phi = 0.0, vsq = 0.0;
        for (int k = 0; k < dx; ++k) phi += 0.5 * xv[k] * xv[k];
        for (int k = dx; k < 2 * dx; ++k) vsq += xv[k] * xv[k];
        return std::exp(-(0.5 * vsq + phi) / theta) / norm;
      },
      g);
}

// tendency = -(v.grad_x f + E(x).grad_v f) + (mu_inf rho - f)/tau, every
// transport line discretized with the frozen-coefficient WENO kernel.
inline void vb_rhs_into(const GridGeometry& g, const VbWorkspace& ws,
                        std::span<const double> state, const VlasovBoltzmannSpec& spec,
                        const WenoParams& p, int threads, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const int dx = ws.space_dim;
  for (int j = 0; j < dx; ++j) {
    // x_j transport with coefficient v_j, constant along each x_j line
    const auto ex = detail::IndexExtractor::make(g, j, dx + j);
    const auto& vc = ws.coords[dx + j];
    detail::advective_sweep(g, j, state, p, threads,
                            [&](std::size_t which) { return vc[ex(which)]; }, out);
    // v_j transport with coefficient E_j(x) = -x_j
    const auto exv = detail::IndexExtractor::make(g, dx + j, j);
    const auto& xc = ws.coords[j];
    detail::advective_sweep(g, dx + j, state, p, threads,
                            [&](std::size_t which) { return -xc[exv(which)]; }, out);
  }
  // relaxation (mu rho - f)/tau; the velocity block is contiguous
  const std::size_t vn = ws.vel_size;
  const std::size_t xn = state.size() / vn;
  const double inv_tau = 1.0 / spec.tau;
  parallel_for(xn, threads, [&](std::size_t s) {
    const double* block = state.data() + s * vn;
    double rho = 0.0;
    for (std::size_t i = 0; i < vn; ++i) rho += ws.vweights[i] * block[i];
    double* o = out.data() + s * vn;
    for (std::size_t i = 0; i < vn; ++i)
      o[i] += (ws.mu_norm[i] * rho - block[i]) * inv_tau;
  });
}

inline GridField vb_rhs(const GridField& f, const VlasovBoltzmannSpec& spec, const WenoParams& p,
                        int threads = 1) {
  for (auto b : f.geom.boundary)
    if (b != BoundaryKind::zero)
      throw std::invalid_argument("vb_rhs: zero boundaries required");
  const auto ws = VbWorkspace::make(f.geom, spec);
  GridField out = GridField::zeros(f.geom);
  vb_rhs_into(f.geom, ws, f.values, spec, p, threads, out.values);
  return out;
}

// ---------------------------------------------------------------------------
// reduced Vlasov-Maxwell system (x2, xi1, xi2)
// ---------------------------------------------------------------------------

struct VmWorkspace {
  int nx = 0, n1 = 0, n2 = 0;
  std::vector<double> xi1, xi2;       // velocity coordinates
  std::vector<double> w_xi1, w_j1;    // moment weights over the (xi1, xi2) block
  std::vector<double> w_j2;

  static VmWorkspace make(const GridGeometry& g, const VlasovMaxwellSpec&) {
    if (g.dim() != 3) throw std::invalid_argument("VmWorkspace: grid rank must be 3");
    if (g.boundary[0] != BoundaryKind::periodic || g.boundary[1] != BoundaryKind::zero ||
        g.boundary[2] != BoundaryKind::zero)
      throw std::invalid_argument("VmWorkspace: need periodic x2 and zero xi boundaries");
    VmWorkspace ws;
    ws.nx = g.points[0];
    ws.n1 = g.points[1];
    ws.n2 = g.points[2];
    ws.xi1.resize(ws.n1);
    for (int i = 0; i < ws.n1; ++i) ws.xi1[i] = grid_point_coordinate_1d(g, 1, i);
    ws.xi2.resize(ws.n2);
    for (int i = 0; i < ws.n2; ++i) ws.xi2[i] = grid_point_coordinate_1d(g, 2, i);
    const auto wblock = detail::block_weights(g, 1, 3);
    ws.w_j1.resize(wblock.size());
    ws.w_j2.resize(wblock.size());
    for (int i1 = 0; i1 < ws.n1; ++i1)
      for (int i2 = 0; i2 < ws.n2; ++i2) {
        const std::size_t q = static_cast<std::size_t>(i1) * ws.n2 + i2;
        ws.w_j1[q] = wblock[q] * ws.xi1[i1];
        ws.w_j2[q] = wblock[q] * ws.xi2[i2];
      }
    return ws;
  }

  std::size_t field_size() const {
    return static_cast<std::size_t>(nx) * n1 * n2;
  }
  std::size_t state_size() const { return field_size() + 3 * static_cast<std::size_t>(nx); }
};

// Current densities j1, j2: velocity moments of f per x2 point.
inline void vm_currents(const VmWorkspace& ws, std::span<const double> f,
                        std::span<double> j1, std::span<double> j2) {
  const std::size_t vn = static_cast<std::size_t>(ws.n1) * ws.n2;
  for (int ix = 0; ix < ws.nx; ++ix) {
    const double* block = f.data() + static_cast<std::size_t>(ix) * vn;
    double a = 0.0, b = 0.0;
    for (std::size_t q = 0; q < vn; ++q) {
      a += ws.w_j1[q] * block[q];
      b += ws.w_j2[q] * block[q];
    }
    j1[ix] = a;
    j2[ix] = b;
  }
}

// Coupled tendency of (f, E1, E2, B3). The distribution is transported
// dimension by dimension with per-line frozen coefficients; the field
// subsystem is advanced through the characteristic variables w± = E1 ± B3,
// which satisfy w±_t = ±w±_x2 - j1 and are upwinded per characteristic.
inline void vm_rhs_into(const GridGeometry& g, const VmWorkspace& ws,
                        std::span<const double> state, const VlasovMaxwellSpec& spec,
                        const WenoParams& p, int threads, std::span<double> out) {
  (void)spec;
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t fs = ws.field_size();
  const int nx = ws.nx;
  std::span<const double> f = state.subspan(0, fs);
  std::span<const double> e1 = state.subspan(fs, nx);
  std::span<const double> e2 = state.subspan(fs + nx, nx);
  std::span<const double> b3 = state.subspan(fs + 2 * nx, nx);
  std::span<double> df = out.subspan(0, fs);
  std::span<double> de1 = out.subspan(fs, nx);
  std::span<double> de2 = out.subspan(fs + nx, nx);
  std::span<double> db3 = out.subspan(fs + 2 * nx, nx);

  // x2 transport, coefficient xi2
  {
    const auto ex = detail::IndexExtractor::make(g, 0, 2);
    detail::advective_sweep(g, 0, f, p, threads,
                            [&](std::size_t which) { return ws.xi2[ex(which)]; }, df);
  }
  // xi1 transport, coefficient E1 + xi2 B3
  {
    const auto exx = detail::IndexExtractor::make(g, 1, 0);
    const auto exv = detail::IndexExtractor::make(g, 1, 2);
    detail::advective_sweep(g, 1, f, p, threads,
                            [&](std::size_t which) {
                              const int ix = exx(which);
                              return e1[ix] + ws.xi2[exv(which)] * b3[ix];
                            },
                            df);
  }
  // xi2 transport, coefficient E2 - xi1 B3
  {
    const auto exx = detail::IndexExtractor::make(g, 2, 0);
    const auto exv = detail::IndexExtractor::make(g, 2, 1);
    detail::advective_sweep(g, 2, f, p, threads,
                            [&](std::size_t which) {
                              const int ix = exx(which);
                              return e2[ix] - ws.xi1[exv(which)] * b3[ix];
                            },
                            df);
  }

  std::vector<double> j1(nx), j2(nx);
  vm_currents(ws, f, j1, j2);

  std::vector<double> wp(nx), wm(nx), dwp(nx), dwm(nx);
  for (int i = 0; i < nx; ++i) {
    wp[i] = e1[i] + b3[i];
    wm[i] = e1[i] - b3[i];
  }
  const double hx = g.spacing[0];
  advect_derivative_line(wp, -1.0, hx, BoundaryKind::periodic, p, dwp);
  advect_derivative_line(wm, +1.0, hx, BoundaryKind::periodic, p, dwm);
  for (int i = 0; i < nx; ++i) {
    const double tp = -dwp[i] - j1[i];  // d/dt w+
    const double tm = -dwm[i] - j1[i];  // d/dt w-
    de1[i] = 0.5 * (tp + tm);
    db3[i] = 0.5 * (tp - tm);
    de2[i] = -j2[i];
  }
}

inline std::pair<GridField, MaxwellFieldState> vm_rhs(const GridField& f,
                                                      const MaxwellFieldState& fields,
                                                      const VlasovMaxwellSpec& spec,
                                                      const WenoParams& p, int threads = 1) {
  const auto ws = VmWorkspace::make(f.geom, spec);
  if (static_cast<int>(fields.e1.size()) != ws.nx ||
      static_cast<int>(fields.e2.size()) != ws.nx ||
      static_cast<int>(fields.b3.size()) != ws.nx)
    throw std::invalid_argument("vm_rhs: field extents must match the x2 point count");
  std::vector<double> state(ws.state_size());
  std::copy(f.values.begin(), f.values.end(), state.begin());
  std::copy(fields.e1.begin(), fields.e1.end(), state.begin() + ws.field_size());
  std::copy(fields.e2.begin(), fields.e2.end(), state.begin() + ws.field_size() + ws.nx);
  std::copy(fields.b3.begin(), fields.b3.end(), state.begin() + ws.field_size() + 2 * ws.nx);
  std::vector<double> out(state.size());
  vm_rhs_into(f.geom, ws, state, spec, p, threads, out);
  GridField df;
  df.geom = f.geom;
  df.values.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(ws.field_size()));
  MaxwellFieldState dfl;
  dfl.e1.assign(out.begin() + ws.field_size(), out.begin() + ws.field_size() + ws.nx);
  dfl.e2.assign(out.begin() + ws.field_size() + ws.nx,
                out.begin() + ws.field_size() + 2 * ws.nx);
  dfl.b3.assign(out.begin() + ws.field_size() + 2 * ws.nx, out.end());
  return {std::move(df), std::move(dfl)};
}

// ---------------------------------------------------------------------------
// exact solutions
// ---------------------------------------------------------------------------

// Solves u = mean + amp*sin(xi - d*t*u) along the characteristic relation of
// the d-dimensional Burgers equation, Newton with bisection fallback.
inline double burgers_sine_exact(double mean, double amp, double xi, int d, double t,
                                 double tol = 1e-14, int max_iter = 100) {
  auto g = [&](double u) { return u - mean - amp * std::sin(xi - d * t * u); };
  auto gp = [&](double u) { return 1.0 + amp * d * t * std::cos(xi - d * t * u); };
  double lo = mean - std::abs(amp), hi = mean + std::abs(amp);
  double u = mean + amp * std::sin(xi - d * t * mean);
  for (int it = 0; it < max_iter; ++it) {
    const double r = g(u);
    if (std::abs(r) <= tol) return u;
    const double dp = gp(u);
    double next = (dp != 0.0) ? u - r / dp : lo - 1.0;
    if (!(next >= lo && next <= hi)) {
      // bisection fallback keeps the bracket [lo, hi] with g(lo) <= 0 <= g(hi)
      if (g(lo) > 0.0 || g(hi) < 0.0) return u;
      double a = lo, b = hi;
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (a + b);
        if (g(m) <= 0.0)
          a = m;
        else
          b = m;
      }
      next = 0.5 * (a + b);
    }
    u = next;
  }
  return u;
}

// ---------------------------------------------------------------------------
// problem presets (benchmark experiments)
// ---------------------------------------------------------------------------

struct ProblemSpec {
  ModelKind kind = ModelKind::advection;
  DomainBox box;
  std::vector<BoundaryKind> boundary;
  std::function<double(std::span<const double>)> initial;
  std::function<double(std::span<const double>, double)> exact;  // null when unavailable
  bool normalize_initial_mass = false;
  ScalarConservationLaw law;
  VlasovBoltzmannSpec vb;
  VlasovMaxwellSpec vm;
  // Vlasov-Maxwell initial fields over x2
  std::function<double(double)> init_b3;
};

enum class ExampleId { ex1, ex2, ex3a, ex3b, ex4, ex5a, ex5b, ex6 };

struct ExampleDefaults {
  ProblemSpec problem;
  double tfinal = 0.0;
  DtMode dt_mode = DtMode::accuracy;
  WenoMode scheme = WenoMode::nonlinear;
  InterpMode prolongation = InterpMode::weno;
  double cfl = 0.4;
  std::vector<double> snapshot_times;
  double range_lo = 0.0, range_hi = 0.0;  // initial-data range, for oscillation checks
};

inline ExampleDefaults make_example(ExampleId id) {
  using std::numbers::pi;
  ExampleDefaults ex;
  switch (id) {
    case ExampleId::ex1: {
      auto& p = ex.problem;
      p.kind = ModelKind::advection;
      p.box = DomainBox::cube(0.0, 4.0, 2);
      p.boundary.assign(2, BoundaryKind::periodic);
      p.law = {ModelKind::advection, {1.0, 1.0}};
      p.initial = [](std::span<const double> x) {
        return 0.3 + 0.7 * std::sin(0.5 * pi * (x[0] + x[1]));
      };
      p.exact = [](std::span<const double> x, double t) {
        return 0.3 + 0.7 * std::sin(0.5 * pi * (x[0] - t + x[1] - t));
      };
      ex.tfinal = 0.5;
      ex.dt_mode = DtMode::accuracy;
      ex.scheme = WenoMode::linear;
      ex.prolongation = InterpMode::lagrange;
      ex.range_lo = -0.4;
      ex.range_hi = 1.0;
      break;
    }
    case ExampleId::ex2: {
      auto& p = ex.problem;
      p.kind = ModelKind::advection;
      p.box = DomainBox::cube(0.0, 2.0 * pi, 3);
      p.boundary.assign(3, BoundaryKind::periodic);
      p.law = {ModelKind::advection, {1.0, 1.0, 1.0}};
      p.initial = [](std::span<const double> x) {
        return 1.0 + 0.5 * std::sin(x[0] + x[1] + x[2]);
      };
      p.exact = [](std::span<const double> x, double t) {
        return 1.0 + 0.5 * std::sin(x[0] + x[1] + x[2] - 3.0 * t);
      };
      ex.tfinal = 0.5;
      ex.dt_mode = DtMode::accuracy;
      ex.scheme = WenoMode::linear;
      ex.prolongation = InterpMode::lagrange;
      ex.range_lo = 0.5;
      ex.range_hi = 1.5;
      break;
    }
    case ExampleId::ex3a:
    case ExampleId::ex3b: {
      const int d = (id == ExampleId::ex3a) ? 2 : 3;
      auto& p = ex.problem;
      p.kind = ModelKind::burgers;
      p.box = DomainBox::cube(0.0, 2.0 * pi, d);
      p.boundary.assign(d, BoundaryKind::periodic);
      p.law = {ModelKind::burgers, {}};
      p.initial = [](std::span<const double> x) {
        double s = 0.0;
        for (double c : x) s += c;
        return 1.0 + 0.5 * std::sin(s);
      };
      p.exact = [d](std::span<const double> x, double t) {
        double s = 0.0;
        for (double c : x) s += c;
        return burgers_sine_exact(1.0, 0.5, s, d, t);
      };
      ex.tfinal = (id == ExampleId::ex3a) ? 0.3 : 0.1;
      ex.dt_mode = DtMode::accuracy;
      ex.scheme = WenoMode::nonlinear;
      ex.prolongation = InterpMode::weno;
      ex.range_lo = 0.5;
      ex.range_hi = 1.5;
      break;
    }
    case ExampleId::ex4: {
      auto& p = ex.problem;
      p.kind = ModelKind::burgers;
      p.box = DomainBox::cube(0.0, 2.0 * pi, 3);
      p.boundary.assign(3, BoundaryKind::periodic);
      p.law = {ModelKind::burgers, {}};
      p.initial = [](std::span<const double> x) {
        return 0.3 + 0.7 * std::sin(x[0] + x[1] + x[2]);
      };
      ex.tfinal = 0.52;  // past shock formation
      ex.dt_mode = DtMode::cfl;
      ex.scheme = WenoMode::nonlinear;
      ex.prolongation = InterpMode::weno;
      ex.snapshot_times = {0.52};
      ex.range_lo = -0.4;
      ex.range_hi = 1.0;
      break;
    }
    case ExampleId::ex5a: {
      auto& p = ex.problem;
      p.kind = ModelKind::vlasov_boltzmann;
      p.box = DomainBox::cube(-5.0, 5.0, 2);
      p.boundary.assign(2, BoundaryKind::zero);
      p.vb = VlasovBoltzmannSpec{1, 1.0, 1.0};
      p.normalize_initial_mass = true;
      p.initial = [](std::span<const double> xv) {
        const double x = xv[0], v = xv[1];
        const double s = std::sin(0.5 * x * x);
        return s * s * std::exp(-0.5 * (x * x + v * v));
      };
      ex.tfinal = 6.0;
      ex.dt_mode = DtMode::cfl;
      ex.scheme = WenoMode::nonlinear;
      ex.prolongation = InterpMode::weno;
      ex.snapshot_times = {0.5, 1.0, 2.0, 3.0, 6.0};
      break;
    }
    case ExampleId::ex5b: {
      auto& p = ex.problem;
      p.kind = ModelKind::vlasov_boltzmann;
      p.box = DomainBox::cube(-5.0, 5.0, 4);
      p.boundary.assign(4, BoundaryKind::zero);
      p.vb = VlasovBoltzmannSpec{2, 1.0, 1.0};
      p.normalize_initial_mass = true;
      p.initial = [](std::span<const double> xv) {
        const double x1 = xv[0], x2 = xv[1], v1 = xv[2], v2 = xv[3];
        const double s = std::sin(0.5 * x1 * x1);
        const double c = std::cos(0.5 * x2 * x2);
        return s * s * c * c * std::exp(-0.5 * (x1 * x1 + x2 * x2 + v1 * v1 + v2 * v2));
      };
      ex.tfinal = 3.0;
      ex.dt_mode = DtMode::cfl;
      ex.scheme = WenoMode::nonlinear;
      ex.prolongation = InterpMode::weno;
      ex.snapshot_times = {0.5, 1.0, 3.0};
      break;
    }
    case ExampleId::ex6: {
      auto& p = ex.problem;
      p.kind = ModelKind::vlasov_maxwell;
      const double k0 = 0.2;
      p.vm = VlasovMaxwellSpec{};
      p.box = DomainBox::make({0.0, -1.2, -1.2}, {2.0 * pi / k0, 1.2, 1.2});
      p.boundary = {BoundaryKind::periodic, BoundaryKind::zero, BoundaryKind::zero};
      const auto vm = p.vm;
      p.initial = [vm](std::span<const double> x) {
        const double xi1 = x[1], xi2 = x[2];
        const double g1 = vm.delta * std::exp(-(xi1 - vm.v01) * (xi1 - vm.v01) / vm.beta);
        const double g2 = (1.0 - vm.delta) * std::exp(-(xi1 + vm.v02) * (xi1 + vm.v02) / vm.beta);
        return std::exp(-xi2 * xi2 / vm.beta) * (g1 + g2) / (pi * vm.beta);
      };
      p.init_b3 = [vm](double x2) { return vm.b * std::sin(vm.k0 * x2); };
      ex.tfinal = 10.0;
      ex.dt_mode = DtMode::cfl;
      ex.scheme = WenoMode::nonlinear;
      ex.prolongation = InterpMode::weno;
      ex.snapshot_times = {10.0};
      break;
    }
  }
  return ex;
}

// ---------------------------------------------------------------------------
// family adapter for evolve_family
// ---------------------------------------------------------------------------

// Per-member tendency evaluation and family-wide wave speeds for the shared
// time step. Holds the per-grid caches for the kinetic models.
class FamilyModel {
 public:
  FamilyModel(const ProblemSpec& spec, CombinationSet& set, WenoParams params, int threads)
      : spec_(&spec), set_(&set), params_(params), threads_(threads) {
    if (spec.kind == ModelKind::vlasov_boltzmann) {
      for (auto& m : set.members) vb_.push_back(VbWorkspace::make(m.geom, spec.vb));
    } else if (spec.kind == ModelKind::vlasov_maxwell) {
      for (auto& m : set.members) vm_.push_back(VmWorkspace::make(m.geom, spec.vm));
    }
    rhs_calls_.assign(set.members.size(), 0);
  }

  std::size_t state_size(std::size_t mi) const {
    const auto& m = set_->members[mi];
    if (spec_->kind == ModelKind::vlasov_maxwell) return vm_[mi].state_size();
    return m.geom.total_points();
  }

  void rhs(std::size_t mi, const std::vector<double>& state, std::vector<double>& out) {
    const auto& g = set_->members[mi].geom;
    out.resize(state.size());
    switch (spec_->kind) {
      case ModelKind::advection:
      case ModelKind::burgers:
        conservation_law_rhs_into(g, state, spec_->law, params_, threads_, out);
        break;
      case ModelKind::vlasov_boltzmann:
        vb_rhs_into(g, vb_[mi], state, spec_->vb, params_, threads_, out);
        break;
      case ModelKind::vlasov_maxwell:
        vm_rhs_into(g, vm_[mi], state, spec_->vm, params_, threads_, out);
        break;
    }
    ++rhs_calls_[mi];
  }

  // per-dimension maxima over all grids of the local characteristic speed
  std::vector<double> family_wave_speeds() const {
    const int d = set_->members.front().geom.dim();
    std::vector<double> speeds(d, 0.0);
    switch (spec_->kind) {
      case ModelKind::advection:
        for (int k = 0; k < d; ++k) speeds[k] = std::abs(spec_->law.speeds[k]);
        break;
      case ModelKind::burgers: {
        double umax = 0.0;
        for (const auto& m : set_->members) umax = std::max(umax, detail::max_abs(m.state));
        speeds.assign(d, umax);
        break;
      }
      case ModelKind::vlasov_boltzmann: {
        const int dx = spec_->vb.space_dim;
        for (const auto& m : set_->members)
          for (int j = 0; j < dx; ++j) {
            const auto& g = m.geom;
            speeds[j] = std::max(speeds[j], std::max(std::abs(g.box.lower[dx + j]),
                                                     std::abs(g.box.upper[dx + j])));
            speeds[dx + j] = std::max(speeds[dx + j], std::max(std::abs(g.box.lower[j]),
                                                               std::abs(g.box.upper[j])));
          }
        break;
      }
      case ModelKind::vlasov_maxwell: {
        for (std::size_t mi = 0; mi < set_->members.size(); ++mi) {
          const auto& ws = vm_[mi];
          const auto& st = set_->members[mi].state;
          const std::size_t fs = ws.field_size();
          const double* e1 = st.data() + fs;
          const double* e2 = st.data() + fs + ws.nx;
          const double* b3 = st.data() + fs + 2 * ws.nx;
          double s0 = 1.0;  // field characteristics travel at unit speed
          for (double v : ws.xi2) s0 = std::max(s0, std::abs(v));
          double s1 = 0.0, s2 = 0.0;
          for (int ix = 0; ix < ws.nx; ++ix) {
            for (double v : ws.xi2) s1 = std::max(s1, std::abs(e1[ix] + v * b3[ix]));
            for (double v : ws.xi1) s2 = std::max(s2, std::abs(e2[ix] - v * b3[ix]));
          }
          speeds[0] = std::max(speeds[0], s0);
          speeds[1] = std::max(speeds[1], s1);
          speeds[2] = std::max(speeds[2], s2);
        }
        break;
      }
    }
    return speeds;
  }

  long long rhs_calls(std::size_t mi) const { return rhs_calls_[mi]; }

 private:
  const ProblemSpec* spec_;
  CombinationSet* set_;
  WenoParams params_;
  int threads_;
  std::vector<VbWorkspace> vb_;
  std::vector<VmWorkspace> vm_;
  std::vector<long long> rhs_calls_;
};

// Restrict the initial data of the problem onto every member grid (and seed
// the Maxwell field lines for the Vlasov-Maxwell system).
inline void initialize_family(CombinationSet& set, const ProblemSpec& spec) {
  for (auto& m : set.members) {
    GridField f0 = restrict_to_grid(spec.initial, m.geom);
    if (spec.normalize_initial_mass) f0 = normalize_initial(std::move(f0));
    if (spec.kind == ModelKind::vlasov_maxwell) {
      const int nx = m.geom.points[0];
      m.state.assign(f0.values.size() + 3 * static_cast<std::size_t>(nx), 0.0);
      std::copy(f0.values.begin(), f0.values.end(), m.state.begin());
      for (int i = 0; i < nx; ++i) {
        const double x2 = grid_point_coordinate_1d(m.geom, 0, i);
        m.state[f0.values.size() + 2 * static_cast<std::size_t>(nx) + i] = spec.init_b3(x2);
      }
    } else {
      m.state = std::move(f0.values);
    }
  }
}

}  // namespace sgweno

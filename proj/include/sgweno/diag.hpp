#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sgweno/grid.hpp"
#include "sgweno/models.hpp"

namespace sgweno {

struct ErrorNorms {
  double l1 = 0.0;
  double linf = 0.0;
};

struct ErrorReport {
  int grid = 0;  // N_h of the finest mesh
  double l1 = 0.0;
  double linf = 0.0;
  std::optional<double> order_l1;
  std::optional<double> order_linf;
  double wall_seconds = 0.0;
};

// Grid-point-average L1 and max-norm of the difference; no volume factor,
// matching the convention of the reference tables.
inline ErrorNorms error_norms(const GridField& numeric, const GridField& exact) {
  if (!numeric.geom.same_extents(exact.geom) || !(numeric.geom.box == exact.geom.box))
    throw std::invalid_argument("error_norms: geometry mismatch");
  double sum = 0.0, mx = 0.0;
  const std::size_t n = numeric.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::abs(numeric.values[i] - exact.values[i]);
    sum += e;
    mx = std::max(mx, e);
  }
  return {sum / static_cast<double>(n), mx};
}

// order[j] = log2(e[j-1]/e[j]) for successive 2x refinements
inline std::vector<double> convergence_order(const std::vector<double>& errors) {
  if (errors.size() < 2) throw std::invalid_argument("convergence_order: need >= 2 errors");
  std::vector<double> orders;
  for (std::size_t j = 1; j < errors.size(); ++j) {
    if (!(errors[j - 1] > 0.0) || !(errors[j] > 0.0))
      throw std::invalid_argument("convergence_order: nonpositive error");
    orders.push_back(std::log2(errors[j - 1] / errors[j]));
  }
  return orders;
}

struct EntropyPair {
  double h2 = 0.0;
  double hlog = 0.0;
};

// H2 = int H^2 M, Hlog = int H log(H) M with H = f/M, trapezoidal quadrature.
// Points with f <= 0 (possible undershoot) contribute 0 to H log H by the
// x log x -> 0 limit convention.
inline EntropyPair entropy_functionals(const GridField& f, const GridField& m) {
  if (!f.geom.same_extents(m.geom) || !(f.geom.box == m.geom.box))
    throw std::invalid_argument("entropy_functionals: geometry mismatch");
  const int d = f.geom.dim();
  std::vector<std::vector<double>> w(d);
  for (int k = 0; k < d; ++k) w[k] = trapezoid_weights_1d(f.geom, k);
  std::vector<int> idx(d, 0);
  double h2 = 0.0, hlog = 0.0;
  const std::size_t n = f.values.size();
  for (std::size_t lin = 0; lin < n; ++lin) {
    const double mv = m.values[lin];
    if (!(mv > 0.0)) throw std::domain_error("entropy_functionals: nonpositive M");
    double wp = 1.0;
    for (int k = 0; k < d; ++k) wp *= w[k][idx[k]];
    const double fv = f.values[lin];
    h2 += wp * fv * fv / mv;
    if (fv > 0.0) hlog += wp * fv * std::log(fv / mv);
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < f.geom.points[k]) break;
      idx[k] = 0;
    }
  }
  return {h2, hlog};
}

struct Oscillation {
  double undershoot = 0.0;
  double overshoot = 0.0;
};

// Range violation of the field against the admissible interval [lo, hi].
inline Oscillation oscillation_metrics(const GridField& u, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("oscillation_metrics: lo must not exceed hi");
  double mn = u.values.front(), mx = u.values.front();
  for (double v : u.values) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return {std::max(0.0, lo - mn), std::max(0.0, mx - hi)};
}

}  // namespace sgweno

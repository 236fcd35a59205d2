#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgweno/combine.hpp"

namespace sgweno {

enum class DtMode { cfl, accuracy };

struct StepPolicy {
  DtMode mode = DtMode::cfl;
  double cfl_number = 0.4;
  double reference_spacing = 0.0;  // minimum spacing of the finest grid
};

struct IntegratorFailure : std::runtime_error {
  int stage;
  explicit IntegratorFailure(int s)
      : std::runtime_error("integrator failure: non-finite tendency at stage " +
                           std::to_string(s)),
        stage(s) {}
};

struct FamilyIntegratorFailure : std::runtime_error {
  LevelIndex level;
  long long step;
  int stage;
  FamilyIntegratorFailure(LevelIndex l, long long st, int sg)
      : std::runtime_error("integrator failure at step " + std::to_string(st)),
        level(std::move(l)),
        step(st),
        stage(sg) {}
};

// Shared step size for the whole grid family. CFL mode uses the summed-inverse
// multi-dimensional form dt = CFL / sum_k(speed_k / spacing_k); accuracy mode
// uses dt = (reference spacing)^{5/3}. Both are clipped so the final step
// lands exactly on the target time. All-zero wave speeds in CFL mode signal a
// stationary state and yield dt = remaining.
inline double compute_dt(const StepPolicy& policy, std::span<const double> wave_speeds,
                         std::span<const double> spacings, double remaining) {
  if (!(remaining > 0.0)) throw std::invalid_argument("compute_dt: remaining must be positive");
  double dt;
  if (policy.mode == DtMode::cfl) {
    if (wave_speeds.size() != spacings.size())
      throw std::invalid_argument("compute_dt: speeds/spacings size mismatch");
    double inv = 0.0;
    for (std::size_t k = 0; k < wave_speeds.size(); ++k) {
      if (wave_speeds[k] < 0.0) throw std::invalid_argument("compute_dt: negative wave speed");
      inv += wave_speeds[k] / spacings[k];
    }
    if (inv == 0.0) return remaining;  // stationary state
    dt = policy.cfl_number / inv;
  } else {
    if (!(policy.reference_spacing > 0.0))
      throw std::invalid_argument("compute_dt: reference spacing must be positive");
    dt = std::pow(policy.reference_spacing, 5.0 / 3.0);
  }
  return std::min(dt, remaining);
}

namespace detail {
// elementwise update with a cheap poison check folded into the pass
inline bool tendency_finite(const std::vector<double>& k) {
  double s = 0.0;
  for (double v : k) s += v;
  return std::isfinite(s);
}
}  // namespace detail

// Third-order SSP (TVD) Runge-Kutta step of Shu-Osher type:
//   u1 = u + dt L(u)
//   u2 = 3/4 u + 1/4 (u1 + dt L(u1))
//   u  = 1/3 u + 2/3 (u2 + dt L(u2))
// Rhs is called as rhs(state, tendency).
class SspRk3 {
 public:
  template <class Rhs>
  void step(std::vector<double>& u, Rhs&& rhs, double dt) {
    const std::size_t n = u.size();
    stage_.resize(n);
    k_.resize(n);

    rhs(u, k_);
    if (!detail::tendency_finite(k_)) throw IntegratorFailure(1);
    for (std::size_t i = 0; i < n; ++i) stage_[i] = u[i] + dt * k_[i];

    rhs(stage_, k_);
    if (!detail::tendency_finite(k_)) throw IntegratorFailure(2);
    for (std::size_t i = 0; i < n; ++i)
      stage_[i] = 0.75 * u[i] + 0.25 * (stage_[i] + dt * k_[i]);

    rhs(stage_, k_);
    if (!detail::tendency_finite(k_)) throw IntegratorFailure(3);
    for (std::size_t i = 0; i < n; ++i)
      u[i] = (1.0 / 3.0) * u[i] + (2.0 / 3.0) * (stage_[i] + dt * k_[i]);
  }

 private:
  std::vector<double> stage_, k_;
};

template <class Rhs>
std::vector<double> ssp_rk3_step(std::vector<double> u, Rhs&& rhs, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("ssp_rk3_step: dt must be positive");
  SspRk3 rk;
  rk.step(u, rhs, dt);
  return u;
}

// March the whole family to time T in lockstep: one dt per step, computed from
// the family-wide wave-speed maxima and the finest spacings, applied to every
// grid. Stops exactly at each entry of `stops` (ascending, all <= T) and at T,
// invoking on_stop(t) there. The model provides per-member tendencies and the
// family wave speeds:
//   model.rhs(member_index, state, tendency)
//   model.family_wave_speeds() -> per-dimension maxima over all grids
// Returns the dt sequence.
template <class Model>
std::vector<double> evolve_family(CombinationSet& set, Model& model, const StepPolicy& policy,
                                  double tfinal, std::vector<double> stops = {},
                                  const std::function<void(double)>& on_stop = nullptr) {
  if (tfinal < 0.0) throw std::invalid_argument("evolve_family: negative final time");
  const GridGeometry finest = finest_geometry(set);

  const double eps_dedupe = 1e-12 * std::max(1.0, tfinal);
  stops.push_back(tfinal);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::remove_if(stops.begin(), stops.end(),
                             [&](double s) { return s <= 0.0 || s > tfinal + eps_dedupe; }),
              stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(),
                          [&](double a, double b) { return std::abs(a - b) <= eps_dedupe; }),
              stops.end());
  if (stops.empty()) stops.push_back(tfinal);  // tfinal == 0

  std::vector<SspRk3> rk(set.members.size());
  std::vector<double> dts;
  double t = 0.0;
  long long step_index = 0;
  const double eps_t = 1e-12 * std::max(1.0, tfinal);

  for (double stop : stops) {
    if (stop > tfinal + eps_t) break;
    while (stop - t > eps_t) {
      const auto speeds = model.family_wave_speeds();
      double dt = compute_dt(policy, speeds, finest.spacing, stop - t);
      if (stop - (t + dt) <= eps_t) dt = stop - t;  // land exactly on the stop
      for (std::size_t mi = 0; mi < set.members.size(); ++mi) {
        auto& member = set.members[mi];
        try {
          rk[mi].step(member.state, [&](const std::vector<double>& s, std::vector<double>& k) {
            model.rhs(mi, s, k);
          }, dt);
        } catch (const IntegratorFailure& e) {
          throw FamilyIntegratorFailure(member.geom.level, step_index, e.stage);
        }
      }
      t += dt;
      dts.push_back(dt);
      ++step_index;
    }
    t = stop;
    if (on_stop) on_stop(t);
  }
  return dts;
}

}  // namespace sgweno

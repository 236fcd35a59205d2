#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sgweno/grid.hpp"
#include "sgweno/interp.hpp"

namespace sgweno {

// Signed coefficients of the sparse-grid combination: the band with level sum
// N_L - j carries (-1)^j * C(d-1, j), j = 0..d-1.
struct CombinationCoefficients {
  int dim = 0;
  int finest_level = 0;
  std::vector<long long> coef;  // indexed by j = finest_level - band_sum

  long long for_level_sum(int s) const {
    const int j = finest_level - s;
    if (j < 0 || j >= dim) throw std::out_of_range("CombinationCoefficients: sum outside bands");
    return coef[j];
  }
};

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline CombinationCoefficients combination_coefficients(int d, int nl) {
  if (d < 1 || d > 4) throw std::invalid_argument("combination_coefficients: d must be 1..4");
  if (nl < d - 1) throw std::invalid_argument("combination_coefficients: need N_L >= d-1");
  CombinationCoefficients c;
  c.dim = d;
  c.finest_level = nl;
  c.coef.resize(d);
  for (int j = 0; j < d; ++j) c.coef[j] = (j % 2 == 0 ? 1 : -1) * binomial(d - 1, j);
  return c;
}

// One semi-coarsened grid of the family together with its evolving state.
// The leading geom.total_points() entries of `state` are the grid-field values
// that enter the combination; any trailing entries are model state evolved
// alongside but never combined (the Maxwell field lines).
struct FamilyMember {
  GridGeometry geom;
  std::vector<double> state;

  std::size_t field_size() const { return geom.total_points(); }

  GridField field() const {
    GridField f;
    f.geom = geom;
    f.values.assign(state.begin(), state.begin() + static_cast<std::ptrdiff_t>(field_size()));
    return f;
  }
};

struct CombinationSet {
  int finest_level = 0;
  std::vector<FamilyMember> members;  // sorted by level index
};

// Build the empty family over all combination level indices.
inline CombinationSet make_family(const DomainBox& box, const std::vector<int>& root_cells,
                                  const std::vector<BoundaryKind>& boundary, int nl) {
  auto levels = enumerate_combination_levels(box.dim(), nl);
  std::sort(levels.begin(), levels.end());
  CombinationSet set;
  set.finest_level = nl;
  set.members.reserve(levels.size());
  for (auto& l : levels) {
    FamilyMember m;
    m.geom = GridGeometry::make(box, l, root_cells, boundary);
    m.state.assign(m.geom.total_points(), 0.0);
    set.members.push_back(std::move(m));
  }
  return set;
}

inline GridGeometry finest_geometry(const CombinationSet& set) {
  if (set.members.empty()) throw std::invalid_argument("finest_geometry: empty family");
  const auto& g0 = set.members.front().geom;
  return GridGeometry::make(g0.box,
                            LevelIndex{std::vector<int>(g0.dim(), set.finest_level)},
                            g0.root_cells, g0.boundary);
}

// Superpose the prolonged per-grid solutions with the combination
// coefficients, accumulating in sorted level order into one finest-grid field.
inline GridField combine(const CombinationSet& set, InterpMode mode, double epsilon,
                         int threads = 1) {
  if (set.members.empty()) throw std::invalid_argument("combine: empty family");
  const auto& g0 = set.members.front().geom;
  const int d = g0.dim();
  auto required = enumerate_combination_levels(d, set.finest_level);
  std::sort(required.begin(), required.end());
  if (required.size() != set.members.size())
    throw std::invalid_argument("combine: missing grid in combination set");
  for (std::size_t i = 0; i < required.size(); ++i) {
    const auto& m = set.members[i];
    if (!(m.geom.level == required[i]))
      throw std::invalid_argument("combine: missing grid in combination set");
    if (!(m.geom.box == g0.box) || m.geom.root_cells != g0.root_cells ||
        m.geom.boundary != g0.boundary)
      throw std::invalid_argument("combine: inconsistent domain");
  }

  const auto coeffs = combination_coefficients(d, set.finest_level);
  GridField acc = GridField::zeros(finest_geometry(set));
  for (const auto& m : set.members) {
    const double c = static_cast<double>(coeffs.for_level_sum(m.geom.level.sum()));
    GridField p = prolong(m.field(), set.finest_level, mode, epsilon, threads);
    const std::size_t n = acc.values.size();
    for (std::size_t i = 0; i < n; ++i) acc.values[i] += c * p.values[i];
  }
  return acc;
}

}  // namespace sgweno

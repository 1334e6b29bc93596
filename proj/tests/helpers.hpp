#pragma once

// Shared instance builders for the unit and acceptance suites: the worked
// examples plus seeded random families. Everything here is deterministic
// given the caller's RNG state.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "varsel/integrand.hpp"
#include "varsel/interval.hpp"
#include "varsel/measure.hpp"
#include "varsel/plq.hpp"
#include "varsel/setmap.hpp"

namespace varsel {
namespace testing {

// Constant tube [-2,2] whose value shrinks to [-1,1] at t = 0.5.
inline PiecewiseSetMap radius_jump_map() {
  std::vector<AffineComponent> tube{AffineComponent{-2.0, 0.0, 2.0, 0.0}};
  return PiecewiseSetMap({0.0, 0.5, 1.0}, {tube, tube},
                         {IntervalUnion::single(-2.0, 2.0),
                          IntervalUnion::single(-1.0, 1.0),
                          IntervalUnion::single(-2.0, 2.0)});
}

inline Measure leb_atom_half() {
  return Measure({0.0, 1.0}, {1.0}, {Atom{0.5, 1.0}});
}

// Dyadic staircase truncated at level N: on (2^-(n+1), 2^-n) the value is
// {2^-n} along with [1,2]; below 2^-(N+1) it freezes at {2^-(N+1)} with
// [1,2]. Breakpoint values take the closure of both one-sided limits.
inline PiecewiseSetMap make_staircase(int N) {
  std::vector<double> grid;
  grid.push_back(0.0);
  for (int k = N + 1; k >= 0; --k) grid.push_back(std::ldexp(1.0, -k));
  const std::size_t m = grid.size();  // N + 3 nodes, N + 2 pieces

  std::vector<std::vector<AffineComponent>> pieces;
  std::vector<double> point_of_piece;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double p = grid[k + 1];
    point_of_piece.push_back(p);
    pieces.push_back({AffineComponent{p, 0.0, p, 0.0},
                      AffineComponent{1.0, 0.0, 2.0, 0.0}});
  }

  std::vector<IntervalUnion> values;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Interval> parts{Interval{1.0, 2.0}};
    if (i < m - 1) parts.push_back(Interval{point_of_piece[i], point_of_piece[i]});
    if (i > 0) parts.push_back(Interval{point_of_piece[i - 1], point_of_piece[i - 1]});
    values.push_back(IntervalUnion(parts));
  }
  return PiecewiseSetMap(std::move(grid), std::move(pieces), std::move(values));
}

inline PLQFunction box_indicator(double r) { return PLQFunction::indicator(-r, r); }

// Indicator tube of radius 2 whose slice at t = 0.5 pinches to radius 1.
inline NormalIntegrand pinched_box() {
  return NormalIntegrand({0.0, 0.5, 1.0}, {box_indicator(2), box_indicator(2)},
                         {box_indicator(2), box_indicator(1), box_indicator(2)});
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int a, int b) {
  return std::uniform_int_distribution<int>(a, b)(rng);
}

// 0 = t_0 < ... < t_m = 1 with `interior` well-separated interior nodes.
inline std::vector<double> random_grid(std::mt19937_64& rng, int interior) {
  std::vector<double> g;
  while (true) {
    g.assign(1, 0.0);
    for (int i = 0; i < interior; ++i) g.push_back(uniform(rng, 0.08, 0.92));
    g.push_back(1.0);
    std::sort(g.begin(), g.end());
    bool ok = true;
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      if (g[i + 1] - g[i] < 0.06) ok = false;
    if (ok) return g;
  }
}

// Strictly positive density plus up to two atoms; atoms prefer the given
// anchor points so they interact with map breakpoints.
inline Measure random_measure(std::mt19937_64& rng,
                              const std::vector<double>& anchors = {}) {
  std::vector<double> grid = random_grid(rng, uniform_int(rng, 0, 2));
  std::vector<double> dens;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    dens.push_back(uniform(rng, 0.2, 3.0));
  std::vector<Atom> atoms;
  const int na = uniform_int(rng, 0, 2);
  std::vector<double> used;
  for (int i = 0; i < na; ++i) {
    double t;
    if (!anchors.empty() && uniform(rng, 0, 1) < 0.5)
      t = anchors[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<int>(anchors.size()) - 1))];
    else
      t = uniform(rng, 0.05, 0.95);
    bool dup = false;
    for (double u : used)
      if (u == t) dup = true;
    if (dup) continue;
    used.push_back(t);
    atoms.push_back(Atom{t, uniform(rng, 0.1, 2.0)});
  }
  return Measure(std::move(grid), std::move(dens), std::move(atoms));
}

// Continuous affine tube through random node centers and widths. Values at
// the nodes are the tube slices themselves, so the map is isc with solid
// convex values and its plain limits match the tube everywhere.
struct TubeData {
  std::vector<double> grid;
  std::vector<double> center;  // per node
  std::vector<double> width;   // per node, >= 0.25
};

inline TubeData random_tube(std::mt19937_64& rng) {
  TubeData td;
  td.grid = random_grid(rng, uniform_int(rng, 1, 3));
  td.center.resize(td.grid.size());
  td.width.resize(td.grid.size());
  td.center[0] = uniform(rng, -1.5, 1.5);
  td.width[0] = uniform(rng, 0.25, 1.0);
  for (std::size_t i = 1; i < td.grid.size(); ++i) {
    const double len = td.grid[i] - td.grid[i - 1];
    td.center[i] = td.center[i - 1] + uniform(rng, -0.4, 0.4) * len;
    td.width[i] = std::min(
        1.0, std::max(0.25, td.width[i - 1] + uniform(rng, -0.1, 0.1) * len));
  }
  return td;
}

inline PiecewiseSetMap tube_map(const TubeData& td) {
  std::vector<std::vector<AffineComponent>> pieces;
  std::vector<IntervalUnion> values;
  for (std::size_t k = 0; k + 1 < td.grid.size(); ++k) {
    const double t0 = td.grid[k], t1 = td.grid[k + 1];
    const double lo0 = td.center[k] - td.width[k];
    const double lo1 = td.center[k + 1] - td.width[k + 1];
    const double hi0 = td.center[k] + td.width[k];
    const double hi1 = td.center[k + 1] + td.width[k + 1];
    const double a1 = (lo1 - lo0) / (t1 - t0);
    const double b1 = (hi1 - hi0) / (t1 - t0);
    pieces.push_back({AffineComponent{lo0 - a1 * t0, a1, hi0 - b1 * t0, b1}});
  }
  for (std::size_t i = 0; i < td.grid.size(); ++i)
    values.push_back(IntervalUnion::single(td.center[i] - td.width[i],
                                           td.center[i] + td.width[i]));
  return PiecewiseSetMap(td.grid, std::move(pieces), std::move(values));
}

// Fully lower semicontinuous instance: the continuous tube itself.
inline PiecewiseSetMap random_fully_lsc_map(std::mt19937_64& rng) {
  return tube_map(random_tube(rng));
}

// isc solid convex-valued instance: a continuous tube whose node values
// shrink to a random solid subinterval about half the time. Shrunken nodes
// break outer regularity for measures without an atom there.
inline PiecewiseSetMap random_isc_solid_map(std::mt19937_64& rng) {
  const TubeData td = random_tube(rng);
  PiecewiseSetMap map = tube_map(td);
  if (uniform(rng, 0, 1) < 0.4) return map;  // keep a regular share
  for (std::size_t i = 0; i < td.grid.size(); ++i) {
    if (uniform(rng, 0, 1) < 0.5) continue;
    const double lo = td.center[i] - td.width[i];
    const double hi = td.center[i] + td.width[i];
    const double margin = (hi - lo) / 3.0;
    const double nlo = lo + uniform(rng, 0.15, 1.0) * margin;
    const double nhi = hi - uniform(rng, 0.15, 1.0) * margin;
    map = map.with_breakpoint_value(i, IntervalUnion::single(nlo, nhi));
  }
  return map;
}

// Random closed proper convex PLQ: convex pieces stitched with nonnegative
// slope jumps, over a bounded, half-line, or whole-line domain.
inline PLQFunction random_plq(std::mt19937_64& rng) {
  const double kInf = std::numeric_limits<double>::infinity();
  const int shape = uniform_int(rng, 0, 9);
  if (shape == 0) {
    const double x = uniform(rng, -4, 4);
    return PLQFunction::point(x, uniform(rng, -3, 3));
  }
  double lo, hi;
  if (shape <= 4) {
    lo = uniform(rng, -4, 0);
    hi = lo + uniform(rng, 0.5, 5.0);
  } else if (shape <= 6) {
    lo = uniform(rng, -4, 0);
    hi = kInf;
  } else if (shape == 7) {
    lo = -kInf;
    hi = uniform(rng, 0, 4);
  } else {
    lo = -kInf;
    hi = kInf;
  }
  const int nb = uniform_int(rng, 0, 3);
  std::vector<double> breaks;
  if (nb > 0 && std::isfinite(lo) && std::isfinite(hi)) {
    for (int i = 0; i < nb; ++i) breaks.push_back(uniform(rng, lo, hi));
  } else if (nb > 0) {
    const double base = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi - 4 : -2);
    for (int i = 0; i < nb; ++i) breaks.push_back(base + uniform(rng, 0.3, 4.0));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return b - a < 0.15; }),
               breaks.end());
  if (!breaks.empty()) {
    if (std::isfinite(lo) && breaks.front() - lo < 0.1) breaks.erase(breaks.begin());
  }
  if (!breaks.empty()) {
    if (std::isfinite(hi) && hi - breaks.back() < 0.1) breaks.pop_back();
  }

  const std::size_t np = breaks.size() + 1;
  std::vector<PLQPiece> pieces(np);
  // Slopes grow left to right: integrate curvature and add jumps >= 0.
  pieces[0].q = uniform(rng, 0, 1) < 0.5 ? 0.0 : uniform(rng, 0.1, 3.0);
  pieces[0].s = uniform(rng, -3, 3);
  pieces[0].c = uniform(rng, -2, 2);
  for (std::size_t k = 1; k < np; ++k) {
    const double b = breaks[k - 1];
    const double left_slope = pieces[k - 1].q * b + pieces[k - 1].s;
    const double jump = uniform(rng, 0, 1) < 0.5 ? 0.0 : uniform(rng, 0.1, 1.5);
    pieces[k].q = uniform(rng, 0, 1) < 0.5 ? 0.0 : uniform(rng, 0.1, 3.0);
    pieces[k].s = left_slope + jump - pieces[k].q * b;
    const double left_val = pieces[k - 1].value(b);
    pieces[k].c = 0.0;
    pieces[k].c = left_val - pieces[k].value(b);
  }
  return PLQFunction(lo, hi, std::move(breaks), std::move(pieces));
}

// Same, but every knot and coefficient is a multiple of 2^-8 inside a
// bounded window, so a 2^-16 sampling grid hits all kinks exactly.
inline PLQFunction random_plq_dyadic(std::mt19937_64& rng) {
  const double q8 = std::ldexp(1.0, -8);
  auto snap = [&](double x) { return std::round(x / q8) * q8; };
  const double lo = snap(uniform(rng, -6, -1));
  const double hi = snap(uniform(rng, lo + 1.0, 6.0));
  const int nb = uniform_int(rng, 0, 2);
  std::vector<double> breaks;
  for (int i = 0; i < nb; ++i) breaks.push_back(snap(uniform(rng, lo + 0.2, hi - 0.2)));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return b - a < 0.2; }),
               breaks.end());
  const std::size_t np = breaks.size() + 1;
  std::vector<PLQPiece> pieces(np);
  pieces[0].q = uniform(rng, 0, 1) < 0.5 ? 0.0 : snap(uniform(rng, 0.25, 2.0));
  pieces[0].s = snap(uniform(rng, -2, 2));
  pieces[0].c = snap(uniform(rng, -2, 2));
  for (std::size_t k = 1; k < np; ++k) {
    const double b = breaks[k - 1];
    const double left_slope = pieces[k - 1].q * b + pieces[k - 1].s;
    const double jump = uniform(rng, 0, 1) < 0.5 ? 0.0 : snap(uniform(rng, 0.25, 1.0));
    pieces[k].q = uniform(rng, 0, 1) < 0.5 ? 0.0 : snap(uniform(rng, 0.25, 2.0));
    pieces[k].s = left_slope + jump - pieces[k].q * b;
    const double left_val = pieces[k - 1].value(b);
    pieces[k].c = 0.0;
    pieces[k].c = left_val - pieces[k].value(b);
  }
  return PLQFunction(lo, hi, std::move(breaks), std::move(pieces));
}

}  // namespace testing
}  // namespace varsel

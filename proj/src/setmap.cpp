#include "varsel/setmap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "varsel/tolerance.hpp"

namespace varsel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_endpoint(double c0, double c1, double t) {
  return std::isfinite(c0) ? c0 + c1 * t : c0;
}

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("query point outside [0,1]");
}

}  // namespace

Interval AffineComponent::at(double t) const {
  return Interval{eval_endpoint(a0, a1, t), eval_endpoint(b0, b1, t)};
}

PiecewiseSetMap::PiecewiseSetMap(
    std::vector<double> grid, std::vector<std::vector<AffineComponent>> pieces,
    std::vector<IntervalUnion> breakpoint_values)
    : grid_(std::move(grid)),
      pieces_(std::move(pieces)),
      breakpoint_values_(std::move(breakpoint_values)) {
  if (grid_.size() < 2 || grid_.front() != 0.0 || grid_.back() != 1.0)
    throw std::invalid_argument("set map grid must run from 0 to 1");
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
    if (!(grid_[i] < grid_[i + 1]))
      throw std::invalid_argument("set map grid not strictly increasing");
  if (pieces_.size() + 1 != grid_.size())
    throw std::invalid_argument("piece count must match grid");
  if (breakpoint_values_.size() != grid_.size())
    throw std::invalid_argument("need one value per grid point");
  const double tol = set_tol();
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    for (double t : {grid_[k], grid_[k + 1]}) {
      const auto& comps = pieces_[k];
      for (std::size_t j = 0; j < comps.size(); ++j) {
        Interval iv = comps[j].at(t);
        if (std::isnan(iv.lo) || std::isnan(iv.hi))
          throw std::invalid_argument("component endpoint is NaN");
        if (iv.lo > iv.hi + tol)
          throw std::invalid_argument("component collapses: lo > hi");
        if (j + 1 < comps.size()) {
          Interval next = comps[j + 1].at(t);
          if (iv.hi > next.lo + tol)
            throw std::invalid_argument("components overlap inside a piece");
        }
      }
    }
  }
}

PiecewiseSetMap PiecewiseSetMap::constant(const IntervalUnion& value) {
  std::vector<AffineComponent> comps;
  for (const Interval& iv : value.parts())
    comps.push_back(AffineComponent{iv.lo, 0.0, iv.hi, 0.0});
  return PiecewiseSetMap({0.0, 1.0}, {comps}, {value, value});
}

bool PiecewiseSetMap::is_breakpoint(double t) const {
  return std::binary_search(grid_.begin(), grid_.end(), t);
}

IntervalUnion PiecewiseSetMap::piece_limit(std::size_t k, double t) const {
  std::vector<Interval> parts;
  for (const AffineComponent& c : pieces_[k]) parts.push_back(c.at(t));
  return IntervalUnion(std::move(parts));
}

IntervalUnion PiecewiseSetMap::value_at(double t) const {
  check_t(t);
  auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
  if (it != grid_.end() && *it == t)
    return breakpoint_values_[static_cast<std::size_t>(it - grid_.begin())];
  std::size_t k = static_cast<std::size_t>(it - grid_.begin()) - 1;
  return piece_limit(k, t);
}

PiecewiseSetMap PiecewiseSetMap::refined(
    const std::vector<double>& supergrid) const {
  for (double t : grid_)
    if (!std::binary_search(supergrid.begin(), supergrid.end(), t))
      throw std::invalid_argument("supergrid does not refine set map grid");
  std::vector<std::vector<AffineComponent>> pieces(supergrid.size() - 1);
  std::vector<IntervalUnion> values(supergrid.size());
  for (std::size_t i = 0; i < supergrid.size(); ++i) {
    double t = supergrid[i];
    auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
    if (it != grid_.end() && *it == t) {
      values[i] = breakpoint_values_[static_cast<std::size_t>(it - grid_.begin())];
    } else {
      std::size_t k = static_cast<std::size_t>(it - grid_.begin()) - 1;
      values[i] = piece_limit(k, t);
    }
  }
  for (std::size_t i = 0; i + 1 < supergrid.size(); ++i) {
    double mid = 0.5 * (supergrid[i] + supergrid[i + 1]);
    auto it = std::upper_bound(grid_.begin(), grid_.end(), mid);
    std::size_t k = static_cast<std::size_t>(it - grid_.begin()) - 1;
    pieces[i] = pieces_[k];
  }
  return PiecewiseSetMap(supergrid, std::move(pieces), std::move(values));
}

PiecewiseSetMap PiecewiseSetMap::with_breakpoint_value(
    std::size_t index, IntervalUnion value) const {
  std::vector<IntervalUnion> values = breakpoint_values_;
  values.at(index) = std::move(value);
  return PiecewiseSetMap(grid_, pieces_, std::move(values));
}

bool PiecewiseSetMap::convex_valued() const {
  for (const auto& v : breakpoint_values_)
    if (v.size() > 1) return false;
  for (const auto& comps : pieces_)
    if (comps.size() > 1) return false;
  return true;
}

bool PiecewiseSetMap::nonempty_valued() const {
  for (const auto& v : breakpoint_values_)
    if (v.is_empty()) return false;
  for (const auto& comps : pieces_)
    if (comps.empty()) return false;
  return true;
}

IntervalUnion one_sided_limit_set(const PiecewiseSetMap& map, double t,
                                  Side side) {
  check_t(t);
  if (side == Side::Left && t == 0.0)
    throw std::invalid_argument("no left limit at t = 0");
  if (side == Side::Right && t == 1.0)
    throw std::invalid_argument("no right limit at t = 1");
  const auto& grid = map.grid();
  auto it = std::lower_bound(grid.begin(), grid.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - grid.begin());
  if (it != grid.end() && *it == t) {
    std::size_t k = side == Side::Left ? idx - 1 : idx;
    return map.piece_limit(k, t);
  }
  return map.piece_limit(idx - 1, t);
}

IntervalUnion inner_limit(const PiecewiseSetMap& map, double t, Topology top) {
  check_t(t);
  IntervalUnion res = map.value_at(t);
  if (top == Topology::Left) {
    if (t == 0.0) return res;
    return intersect(res, one_sided_limit_set(map, t, Side::Left));
  }
  if (t > 0.0) res = intersect(res, one_sided_limit_set(map, t, Side::Left));
  if (t < 1.0) res = intersect(res, one_sided_limit_set(map, t, Side::Right));
  return res;
}

IntervalUnion outer_limit(const PiecewiseSetMap& map, double t, Topology top) {
  check_t(t);
  IntervalUnion res = map.value_at(t);
  if (top == Topology::Left) {
    if (t == 0.0) return res;
    return unite(res, one_sided_limit_set(map, t, Side::Left));
  }
  if (t > 0.0) res = unite(res, one_sided_limit_set(map, t, Side::Left));
  if (t < 1.0) res = unite(res, one_sided_limit_set(map, t, Side::Right));
  return res;
}

IntervalUnion mu_inner_limit(const PiecewiseSetMap& map, double t,
                             const Measure& mu, Topology top) {
  check_t(t);
  if (!is_strictly_positive(mu))
    throw std::invalid_argument(
        "measure inner limit requires a strictly positive measure");
  const bool atom = mu.atom_weight_at(t) > 0.0;
  if (top == Topology::Left) {
    if (t == 0.0) return map.value_at(0.0);
    IntervalUnion res = one_sided_limit_set(map, t, Side::Left);
    if (atom) res = intersect(res, map.value_at(t));
    return res;
  }
  std::optional<IntervalUnion> res;
  if (t > 0.0) res = one_sided_limit_set(map, t, Side::Left);
  if (t < 1.0) {
    IntervalUnion right = one_sided_limit_set(map, t, Side::Right);
    res = res ? intersect(*res, right) : right;
  }
  if (atom) res = intersect(*res, map.value_at(t));
  return *res;
}

PiecewiseSetMap mu_inner_limit_map(const PiecewiseSetMap& map,
                                   const Measure& mu, Topology top) {
  std::vector<IntervalUnion> values;
  values.reserve(map.grid().size());
  for (double t : map.grid()) values.push_back(mu_inner_limit(map, t, mu, top));
  return PiecewiseSetMap(map.grid(), map.pieces(), std::move(values));
}

namespace {

RegularityReport inclusion_report(
    const PiecewiseSetMap& map, WitnessKind kind,
    const std::function<IntervalUnion(double)>& should_hold_in,
    const std::function<IntervalUnion(double)>& tested_set) {
  RegularityReport report;
  const double tol = set_tol();
  for (double t : map.grid()) {
    IntervalUnion tested = tested_set(t);
    IntervalUnion bound = should_hold_in(t);
    if (auto v = max_violation(tested, bound, tol)) {
      report.verdict = false;
      report.violations.push_back(Witness{t, v->x, kind, v->distance});
    }
  }
  return report;
}

}  // namespace

RegularityReport is_inner_semicontinuous(const PiecewiseSetMap& map,
                                         Topology top) {
  return inclusion_report(
      map, WitnessKind::InnerLimitMiss,
      [&](double t) { return inner_limit(map, t, top); },
      [&](double t) { return map.value_at(t); });
}

RegularityReport is_outer_semicontinuous(const PiecewiseSetMap& map,
                                         Topology top) {
  return inclusion_report(
      map, WitnessKind::OuterLimitEscape,
      [&](double t) { return map.value_at(t); },
      [&](double t) { return outer_limit(map, t, top); });
}

RegularityReport is_outer_mu_regular(const PiecewiseSetMap& map,
                                     const Measure& mu, Topology top) {
  return inclusion_report(
      map, WitnessKind::MeasureLimitEscape,
      [&](double t) { return map.value_at(t); },
      [&](double t) { return mu_inner_limit(map, t, mu, top); });
}

RegularityReport is_fully_lsc(const PiecewiseSetMap& map) {
  if (!map.convex_valued())
    throw std::invalid_argument("full lower semicontinuity needs convex values");
  const double tol = set_tol();
  RegularityReport report = is_inner_semicontinuous(map, Topology::Standard);

  // Solidity: values and piece interiors must have nonempty interior.
  for (std::size_t i = 0; i < map.grid().size(); ++i) {
    const IntervalUnion& v = map.breakpoint_values()[i];
    if (v.is_empty() || v.parts()[0].hi - v.parts()[0].lo <= tol) {
      report.verdict = false;
      double x = v.is_empty() ? 0.0 : v.parts()[0].lo;
      report.violations.push_back(
          Witness{map.grid()[i], x, WitnessKind::NotSolid, 0.0});
    }
  }
  for (std::size_t k = 0; k + 1 < map.grid().size(); ++k) {
    double mid = 0.5 * (map.grid()[k] + map.grid()[k + 1]);
    IntervalUnion v = map.piece_limit(k, mid);
    if (v.is_empty() || v.parts()[0].hi - v.parts()[0].lo <= tol) {
      report.verdict = false;
      double x = v.is_empty() ? 0.0 : v.parts()[0].lo;
      report.violations.push_back(Witness{mid, x, WitnessKind::NotSolid, 0.0});
    }
  }

  // Density condition at grid points: int(L n R) inside the closed value.
  for (double t : map.grid()) {
    IntervalUnion two_sided =
        t == 0.0   ? one_sided_limit_set(map, t, Side::Right)
        : t == 1.0 ? one_sided_limit_set(map, t, Side::Left)
                   : intersect(one_sided_limit_set(map, t, Side::Left),
                               one_sided_limit_set(map, t, Side::Right));
    std::vector<Interval> shrunk;
    for (const Interval& iv : two_sided.parts()) {
      double lo = iv.lo == -kInf ? -kInf : iv.lo + tol;
      double hi = iv.hi == kInf ? kInf : iv.hi - tol;
      if (lo <= hi) shrunk.push_back(Interval{lo, hi});
    }
    IntervalUnion interior(std::move(shrunk));
    if (auto v = max_violation(interior, map.value_at(t), tol)) {
      report.verdict = false;
      report.violations.push_back(
          Witness{t, v->x, WitnessKind::DensityEscape, v->distance});
    }
  }
  return report;
}

namespace {

struct EndpointFn {
  double c0, c1;
  double at(double t) const { return eval_endpoint(c0, c1, t); }
};

// Crossing times of the affine endpoint functions strictly inside (lo, hi).
std::vector<double> crossings(const std::vector<EndpointFn>& fns, double lo,
                              double hi) {
  std::vector<double> ts;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    for (std::size_t j = i + 1; j < fns.size(); ++j) {
      if (!std::isfinite(fns[i].c0) || !std::isfinite(fns[j].c0)) continue;
      double d1 = fns[i].c1 - fns[j].c1;
      double d0 = fns[j].c0 - fns[i].c0;
      if (d1 == 0.0) continue;
      double t = d0 / d1;
      if (t > lo + 1e-12 && t < hi - 1e-12) ts.push_back(t);
    }
  }
  return ts;
}

}  // namespace

PiecewiseSetMap mu_essential_supremum(const std::vector<PiecewiseSetMap>& maps,
                                      const Measure& mu) {
  if (maps.empty())
    throw std::invalid_argument("essential supremum of an empty family");
  std::vector<std::vector<double>> grids;
  for (const auto& m : maps) grids.push_back(m.grid());
  std::vector<double> base = merge_grids(grids);

  // Subdivide so the union's merge structure is constant on each piece.
  std::vector<double> grid = base;
  for (std::size_t k = 0; k + 1 < base.size(); ++k) {
    double mid = 0.5 * (base[k] + base[k + 1]);
    std::vector<EndpointFn> fns;
    for (const auto& m : maps) {
      auto it = std::upper_bound(m.grid().begin(), m.grid().end(), mid);
      std::size_t piece = static_cast<std::size_t>(it - m.grid().begin()) - 1;
      for (const AffineComponent& c : m.pieces()[piece]) {
        fns.push_back(EndpointFn{c.a0, c.a1});
        fns.push_back(EndpointFn{c.b0, c.b1});
      }
    }
    for (double t : crossings(fns, base[k], base[k + 1])) grid.push_back(t);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<PiecewiseSetMap> refined;
  refined.reserve(maps.size());
  for (const auto& m : maps) refined.push_back(m.refined(grid));

  // Merge components piecewise; endpoints of merged components follow the
  // functions realizing them at the midpoint (no crossings inside).
  std::vector<std::vector<AffineComponent>> pieces(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double mid = 0.5 * (grid[k] + grid[k + 1]);
    std::vector<AffineComponent> comps;
    for (const auto& m : refined)
      for (const AffineComponent& c : m.pieces()[k]) comps.push_back(c);
    std::sort(comps.begin(), comps.end(),
              [&](const AffineComponent& x, const AffineComponent& y) {
                return x.at(mid).lo < y.at(mid).lo;
              });
    std::vector<AffineComponent> merged;
    const double tol = set_tol();
    for (const AffineComponent& c : comps) {
      if (!merged.empty() &&
          c.at(mid).lo <= merged.back().at(mid).hi + tol) {
        if (c.at(mid).hi > merged.back().at(mid).hi) {
          merged.back().b0 = c.b0;
          merged.back().b1 = c.b1;
        }
      } else {
        merged.push_back(c);
      }
    }
    pieces[k] = std::move(merged);
  }

  std::vector<IntervalUnion> values(grid.size());
  PiecewiseSetMap skeleton(grid, pieces, values);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = grid[i];
    if (mu.atom_weight_at(t) > 0.0) {
      IntervalUnion v = IntervalUnion::empty();
      for (const auto& m : refined) v = unite(v, m.value_at(t));
      values[i] = v;
    } else {
      IntervalUnion v = IntervalUnion::empty();
      if (t > 0.0) v = unite(v, skeleton.piece_limit(i - 1, t));
      if (t < 1.0) v = unite(v, skeleton.piece_limit(i, t));
      values[i] = v;
    }
  }
  return PiecewiseSetMap(grid, pieces, values);
}

}  // namespace varsel

#include "varsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "varsel/tolerance.hpp"

namespace varsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_selectable(const PiecewiseSetMap& map) {
  if (!map.convex_valued())
    throw std::invalid_argument("selection requires convex values");
  if (!map.nonempty_valued())
    throw std::invalid_argument("selection requires nonempty values");
  if (!is_inner_semicontinuous(map).verdict)
    throw std::invalid_argument("selection requires inner semicontinuity");
}

double clamp_into(double x, const Interval& iv) {
  return std::min(std::max(x, iv.lo), iv.hi);
}

double pick(const Interval& iv, std::optional<double> target) {
  if (target) return clamp_into(*target, iv);
  return representative_point(iv);
}

std::vector<double> selection_grid(const PiecewiseSetMap& map,
                                   std::optional<Anchor> anchor) {
  std::vector<double> grid = map.grid();
  if (anchor && !map.is_breakpoint(anchor->t)) {
    grid.push_back(anchor->t);
    std::sort(grid.begin(), grid.end());
  }
  return grid;
}

// Shrinks [lo, hi] to the subinterval where the affine function taking
// values ga at t0 and gb at t1 stays >= -tol. Returns false when empty.
bool clip_ge(double& lo, double& hi, double ga, double gb, double t0,
             double t1, double tol) {
  bool ok_a = ga >= -tol, ok_b = gb >= -tol;
  if (ok_a && ok_b) return true;
  if (!ok_a && !ok_b) return false;
  double cross = t0 + (-tol - ga) * (t1 - t0) / (gb - ga);
  cross = std::min(std::max(cross, t0), t1);
  if (ok_a)
    hi = std::min(hi, cross);
  else
    lo = std::max(lo, cross);
  return lo <= hi;
}

}  // namespace

PiecewiseFunction continuous_selection(const PiecewiseSetMap& map,
                                       std::optional<Anchor> anchor) {
  require_selectable(map);
  const double tol = set_tol();
  if (anchor) {
    IntervalUnion v = map.value_at(anchor->t);
    if (!v.contains(anchor->x, tol))
      throw std::invalid_argument("anchor point escapes the value");
  }
  std::vector<double> grid = selection_grid(map, anchor);

  PiecewiseSetMap work = map;
  for (int round = 0;; ++round) {
    PiecewiseSetMap refined = work.refined(grid);
    std::vector<double> nodes(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (anchor && grid[i] == anchor->t) {
        nodes[i] = anchor->x;
        continue;
      }
      IntervalUnion v = refined.value_at(grid[i]);
      nodes[i] = pick(v.parts()[0],
                      anchor ? std::optional<double>(anchor->x) : std::nullopt);
    }
    PiecewiseFunction y = PiecewiseFunction::continuous(grid, nodes);
    SelectionReport check = check_essential_selection(map, y, Measure::lebesgue());
    if (check.kind == SelectionClass::Selection) return y;
    if (round >= 20)
      throw std::runtime_error("selection refinement failed to converge");
    std::vector<double> finer = grid;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
      finer.push_back(0.5 * (grid[i] + grid[i + 1]));
    std::sort(finer.begin(), finer.end());
    finer.erase(std::unique(finer.begin(), finer.end()), finer.end());
    grid = std::move(finer);
  }
}

MichaelFamily michael_representation(const PiecewiseSetMap& map, int n) {
  if (n < 0) throw std::invalid_argument("selection count must be nonnegative");
  MichaelFamily family;
  if (n == 0) return family;
  require_selectable(map);

  std::vector<double> lambdas;
  if (n == 1)
    lambdas.push_back(0.5);
  else
    for (int i = 0; i < n; ++i)
      lambdas.push_back(static_cast<double>(i) / (n - 1));

  const auto& grid = map.grid();
  for (double lambda : lambdas) {
    std::vector<double> nodes(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Interval iv = map.value_at(grid[i]).parts()[0];
      double lo = std::max(iv.lo, -kClipBound);
      double hi = std::min(iv.hi, kClipBound);
      nodes[i] = lo + lambda * (hi - lo);
    }
    family.selections.push_back(PiecewiseFunction::continuous(grid, nodes));
  }

  // Covering distance sampled at nodes and piece midpoints.
  std::vector<double> samples = grid;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    samples.push_back(0.5 * (grid[i] + grid[i + 1]));
  double worst = 0.0;
  for (double t : samples) {
    std::vector<Interval> pts;
    for (const auto& y : family.selections) {
      double v = y.value_at(t);
      pts.push_back(Interval{v, v});
    }
    IntervalUnion cloud(std::move(pts));
    worst = std::max(worst, excess(map.value_at(t), cloud));
  }
  family.covering_distance = worst;
  return family;
}

SelectionReport check_essential_selection(const PiecewiseSetMap& map,
                                          const PiecewiseFunction& y,
                                          const Measure& mu) {
  const double tol = set_tol();
  std::vector<double> grid = merge_grids({map.grid(), y.grid()});
  PiecewiseSetMap m = map.refined(grid);
  PiecewiseFunction f = y.refined(grid);

  SelectionReport report;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double t0 = grid[k], t1 = grid[k + 1];
    // Hit window in t for each component: two affine inequalities.
    std::vector<Interval> hits;
    for (const AffineComponent& c : m.pieces()[k]) {
      double lo = t0, hi = t1;
      if (std::isfinite(c.a0)) {
        // y(t) >= a(t): g(t) = y(t) - a(t) affine, g >= -tol.
        double ga = f.piece_value(k, t0) - (c.a0 + c.a1 * t0);
        double gb = f.piece_value(k, t1) - (c.a0 + c.a1 * t1);
        if (!clip_ge(lo, hi, ga, gb, t0, t1, tol)) continue;
      }
      if (std::isfinite(c.b0)) {
        double ha = (c.b0 + c.b1 * t0) - f.piece_value(k, t0);
        double hb = (c.b0 + c.b1 * t1) - f.piece_value(k, t1);
        if (!clip_ge(lo, hi, ha, hb, t0, t1, tol)) continue;
      }
      hits.push_back(Interval{lo, hi});
    }
    IntervalUnion hit_union(std::move(hits));
    IntervalUnion gap = difference(IntervalUnion::single(t0, t1), hit_union);
    for (const Interval& g : gap.parts()) {
      if (g.length() <= tol) continue;  // boundary sliver
      report.violation.push_back(SetPiece{std::max(g.lo, t0),
                                          std::min(g.hi, t1), false, false});
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = grid[i];
    if (!m.value_at(t).contains(f.node_values()[i], tol))
      report.violation.push_back(SetPiece{t, t, true, true});
  }

  report.violation_measure = measure_of(mu, report.violation);
  if (report.violation.empty())
    report.kind = SelectionClass::Selection;
  else if (report.violation_measure <= kNullMeasureTol)
    report.kind = SelectionClass::EssentialOnly;
  else
    report.kind = SelectionClass::NotEssential;
  return report;
}

std::optional<PiecewiseFunction> essential_selection_counterexample(
    const PiecewiseSetMap& map, const Measure& mu, Topology top) {
  if (!map.convex_valued())
    throw std::invalid_argument("counterexample search requires convex values");
  if (!is_strictly_positive(mu))
    throw std::invalid_argument(
        "counterexample search requires a strictly positive measure");
  if (!is_inner_semicontinuous(map, Topology::Standard).verdict)
    throw std::invalid_argument(
        "counterexample search requires inner semicontinuity");

  RegularityReport reg = is_outer_mu_regular(map, mu, top);
  if (reg.verdict) return std::nullopt;

  const Witness* worst = &reg.violations.front();
  for (const Witness& w : reg.violations)
    if (w.violation > worst->violation) worst = &w;

  PiecewiseSetMap limit_map = mu_inner_limit_map(map, mu, top);
  return continuous_selection(limit_map, Anchor{worst->t, worst->x});
}

}  // namespace varsel

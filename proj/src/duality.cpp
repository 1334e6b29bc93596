#include "varsel/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "varsel/setmap.hpp"
#include "varsel/tolerance.hpp"

namespace varsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLineSearchTol = 1e-10;
constexpr double kAscentStallTol = 1e-12;
constexpr int kMaxPasses = 200;

std::vector<double> atom_locations(const std::vector<Atom>& atoms) {
  std::vector<double> out;
  for (const Atom& a : atoms) out.push_back(a.location);
  return out;
}

// Common grid of integrand, dual measure, base measure and every atom.
std::vector<double> common_grid(const NormalIntegrand& h,
                                const SignedMeasure& theta,
                                const Measure& mu) {
  return merge_grids({h.grid(), theta.grid(), mu.grid(),
                      atom_locations(theta.atoms()),
                      atom_locations(mu.atoms())});
}

std::vector<double> dyadic_refine(const std::vector<double>& grid, int level) {
  if (level <= 0) return grid;
  std::size_t n = std::size_t{1} << level;
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double t0 = grid[k], t1 = grid[k + 1];
    out.push_back(t0);
    for (std::size_t j = 1; j < n; ++j)
      out.push_back(t0 + (t1 - t0) * static_cast<double>(j) /
                             static_cast<double>(n));
  }
  out.push_back(grid.back());
  return out;
}

std::size_t node_index(const std::vector<double>& grid, double t) {
  auto it = std::lower_bound(grid.begin(), grid.end(), t);
  if (it == grid.end() || *it != t)
    throw std::logic_error("location is not a grid node");
  return static_cast<std::size_t>(it - grid.begin());
}

void require_solid(const NormalIntegrand& h) {
  for (const PLQFunction& f : h.piece_functions())
    if (!(f.domain().lo < f.domain().hi))
      throw std::invalid_argument("integrand domain has empty interior");
  for (const PLQFunction& f : h.break_functions())
    if (!(f.domain().lo < f.domain().hi))
      throw std::invalid_argument("integrand domain has empty interior");
}

Interval intersect_interval(const Interval& a, const Interval& b) {
  return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Maximize a concave function over [lo, hi] (golden-section, then the best
// of the interior candidate and both endpoints).
template <typename F>
double argmax_concave(F&& f, double lo, double hi) {
  if (lo >= hi) return lo;
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > kLineSearchTol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  double mid = 0.5 * (a + b);
  double best = mid, bestv = f(mid);
  for (double x : {lo, hi}) {
    double v = f(x);
    if (v > bestv) {
      bestv = v;
      best = x;
    }
  }
  return best;
}

double clip_lo(const Interval& box) { return std::max(box.lo, -kClipBound); }
double clip_hi(const Interval& box) { return std::min(box.hi, kClipBound); }

// Search window inside a feasibility box, clipped to the working range;
// degenerates to the nearest feasible point when the box lies outside it.
void search_window(const Interval& box, double& lo, double& hi) {
  lo = clip_lo(box);
  hi = clip_hi(box);
  if (lo > hi) {
    double v = box.lo > kClipBound ? box.lo : box.hi;
    lo = hi = v;
  }
}

bool nondecreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1] - 1e-9) return false;
  return true;
}

struct AtomTerm {
  std::size_t node = 0;
  double weight = 0.0;
};

// Shared per-level data for the continuous-class estimate.
struct ContLevel {
  std::vector<double> grid;
  NormalIntegrand h;
  SignedMeasure theta;
  Measure mu;
  std::vector<AtomTerm> theta_atoms;  // weight * y(node)
  std::vector<AtomTerm> mu_atoms;     // weight * h_node(y(node))
  std::vector<Interval> boxes;
};

ContLevel build_cont_level(const NormalIntegrand& h, const SignedMeasure& theta,
                           const Measure& mu, const std::vector<double>& grid) {
  ContLevel L{grid, h.refined(grid), theta.refined(grid), mu.refined(grid),
              {}, {}, {}};
  for (const Atom& a : L.theta.atoms())
    L.theta_atoms.push_back({node_index(grid, a.location), a.weight});
  for (const Atom& a : L.mu.atoms())
    L.mu_atoms.push_back({node_index(grid, a.location), a.weight});

  std::size_t n = grid.size();
  L.boxes.assign(n, Interval{-kInf, kInf});
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0)
      L.boxes[i] =
          intersect_interval(L.boxes[i], L.h.piece_functions()[i - 1].domain());
    if (i + 1 < n)
      L.boxes[i] =
          intersect_interval(L.boxes[i], L.h.piece_functions()[i].domain());
  }
  for (const AtomTerm& a : L.mu_atoms)
    L.boxes[a.node] =
        intersect_interval(L.boxes[a.node], L.h.at(grid[a.node]).domain());
  for (const Interval& b : L.boxes)
    if (b.lo > b.hi)
      throw std::runtime_error(
          "no continuous feasible start: adjacent domains are disjoint");
  return L;
}

// Contribution of piece k to <y, theta> - I_h(y), y affine y0 -> y1 on it.
double cont_piece_term(const ContLevel& L, std::size_t k, double y0,
                       double y1) {
  double t0 = L.grid[k], t1 = L.grid[k + 1];
  double total = L.theta.densities()[k] * (t1 - t0) * 0.5 * (y0 + y1);
  double rho = L.mu.densities()[k];
  if (rho != 0.0) {
    double v = plq_integral_along(L.h.piece_functions()[k], t0, t1, y0, y1);
    if (v == kInf) return -kInf;
    total -= rho * v;
  }
  return total;
}

double cont_node_term(const ContLevel& L, std::size_t i, double v) {
  double total = 0.0;
  for (const AtomTerm& a : L.theta_atoms)
    if (a.node == i) total += a.weight * v;
  for (const AtomTerm& a : L.mu_atoms)
    if (a.node == i) {
      double hv = L.h.at(L.grid[a.node]).value(v);
      if (hv == kInf) return -kInf;
      total -= a.weight * hv;
    }
  return total;
}

double cont_objective(const ContLevel& L, const std::vector<double>& y) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < L.grid.size(); ++k) {
    double v = cont_piece_term(L, k, y[k], y[k + 1]);
    if (v == -kInf) return -kInf;
    total += v;
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    double v = cont_node_term(L, i, y[i]);
    if (v == -kInf) return -kInf;
    total += v;
  }
  return total;
}

void cont_ascent(const ContLevel& L, std::vector<double>& y) {
  std::size_t n = y.size();
  double prev = cont_objective(L, y);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    for (std::size_t i = 0; i < n; ++i) {
      double lo, hi;
      search_window(L.boxes[i], lo, hi);
      auto local = [&](double v) {
        double total = cont_node_term(L, i, v);
        if (i > 0) total += cont_piece_term(L, i - 1, y[i - 1], v);
        if (i + 1 < n) total += cont_piece_term(L, i, v, y[i + 1]);
        return total;
      };
      double best = argmax_concave(local, lo, hi);
      if (local(best) > local(y[i])) y[i] = best;
    }
    double cur = cont_objective(L, y);
    if (cur - prev < kAscentStallTol) break;
    prev = cur;
  }
}

}  // namespace

double eval_Jhstar(const NormalIntegrand& h, const SignedMeasure& theta,
                   const Measure& mu) {
  if (!is_strictly_positive(mu))
    throw std::invalid_argument("base measure must be strictly positive");
  std::vector<double> grid = common_grid(h, theta, mu);
  NormalIntegrand hh = h.refined(grid);
  SignedMeasure th = theta.refined(grid);
  Measure mm = mu.refined(grid);
  Decomposition dec = lebesgue_decompose(th, mm);

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double rho = mm.densities()[k];
    if (rho == 0.0) continue;
    double v = conjugate(hh.piece_functions()[k]).value(dec.piece_ratio[k]);
    if (v == kInf) return kInf;
    total += v * rho * (grid[k + 1] - grid[k]);
  }
  for (std::size_t i = 0; i < mm.atoms().size(); ++i) {
    const Atom& a = mm.atoms()[i];
    double v = conjugate(hh.at(a.location)).value(dec.atom_ratio[i].weight);
    if (v == kInf) return kInf;
    total += v * a.weight;
  }
  for (const Atom& s : dec.singular.atoms()) {
    double v = recession(conjugate(hh.at(s.location))).value(s.weight);
    if (v == kInf) return kInf;
    total += v;
  }
  return total;
}

std::vector<double> estimate_Ih_conjugate(const NormalIntegrand& h,
                                          const SignedMeasure& theta,
                                          const Measure& mu, int levels) {
  if (levels < 0) throw std::invalid_argument("levels must be nonnegative");
  if (!is_strictly_positive(mu))
    throw std::invalid_argument("base measure must be strictly positive");
  require_solid(h);
  std::vector<double> base = common_grid(h, theta, mu);

  std::vector<double> estimates;
  std::vector<double> y;
  std::vector<double> prev_grid;
  for (int level = 0; level <= levels; ++level) {
    std::vector<double> grid = dyadic_refine(base, level);
    ContLevel L = build_cont_level(h, theta, mu, grid);
    std::vector<double> init(grid.size());
    if (y.empty()) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double lo, hi;
        search_window(L.boxes[i], lo, hi);
        init[i] = 0.5 * (lo + hi);
      }
    } else {
      PiecewiseFunction warm =
          PiecewiseFunction::continuous(prev_grid, y).refined(grid);
      init = warm.node_values();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double lo, hi;
        search_window(L.boxes[i], lo, hi);
        init[i] = std::min(std::max(init[i], lo), hi);
      }
    }
    cont_ascent(L, init);
    estimates.push_back(cont_objective(L, init));
    y = std::move(init);
    prev_grid = std::move(grid);
  }
  return estimates;
}

DualityReport duality_report(const NormalIntegrand& h,
                             const SignedMeasure& theta, const Measure& mu,
                             int levels) {
  DualityReport report;
  report.J = eval_Jhstar(h, theta, mu);
  report.estimates = estimate_Ih_conjugate(h, theta, mu, levels);
  double last = report.estimates.back();
  report.gap = report.J - last;
  report.regular =
      is_outer_mu_regular(domain_map(h), mu, Topology::Standard).verdict;
  bool monotone = nondecreasing(report.estimates);
  if (!std::isfinite(report.J))
    report.consistent = monotone;
  else if (report.regular)
    report.consistent = monotone && last <= report.J + 1e-6 &&
                        report.gap <= kDualityGapTol;
  else
    report.consistent = monotone;
  return report;
}

MembershipReport int_dom_Ih_membership(const NormalIntegrand& h,
                                       const PiecewiseFunction& y,
                                       const Measure& mu) {
  std::vector<double> grid = merge_grids(
      {h.grid(), y.grid(), mu.grid(), atom_locations(mu.atoms())});
  NormalIntegrand hh = h.refined(grid);
  PiecewiseFunction yy = y.refined(grid);
  Measure mm = mu.refined(grid);

  auto dist_into = [](const Interval& dom, double v) {
    double dlo = std::isfinite(dom.lo) ? v - dom.lo : kInf;
    double dhi = std::isfinite(dom.hi) ? dom.hi - v : kInf;
    return std::max(0.0, std::min(dlo, dhi));
  };

  double radius = kInf;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    if (mm.densities()[k] == 0.0) continue;
    Interval dom = hh.piece_functions()[k].domain();
    double y0 = yy.piece_value(k, grid[k]), y1 = yy.piece_value(k, grid[k + 1]);
    radius = std::min({radius, dist_into(dom, y0), dist_into(dom, y1)});
  }
  for (const Atom& a : mm.atoms()) {
    Interval dom = hh.at(a.location).domain();
    radius = std::min(radius, dist_into(dom, yy.value_at(a.location)));
  }
  return MembershipReport{radius > 0.0, radius};
}

namespace {

// Parameters of a left-continuous piecewise-affine function with jumps:
// node values (left limits) interleaved with piece start values.
struct BVLevel {
  std::vector<double> grid;
  NormalIntegrand h;
  SignedMeasure theta;
  Measure mu;
  std::vector<AtomTerm> theta_atoms;
  std::vector<AtomTerm> mu_atoms;
  std::vector<Interval> node_boxes;
  std::vector<Interval> start_boxes;
};

BVLevel build_bv_level(const NormalIntegrand& h, const SignedMeasure& theta,
                       const Measure& mu, const std::vector<double>& grid) {
  BVLevel L{grid, h.refined(grid), theta.refined(grid), mu.refined(grid),
            {}, {}, {}, {}};
  for (const Atom& a : L.theta.atoms())
    L.theta_atoms.push_back({node_index(grid, a.location), a.weight});
  for (const Atom& a : L.mu.atoms())
    L.mu_atoms.push_back({node_index(grid, a.location), a.weight});

  std::size_t n = grid.size();
  L.node_boxes.assign(n, Interval{-kInf, kInf});
  L.start_boxes.assign(n - 1, Interval{-kInf, kInf});
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Interval dom = L.h.piece_functions()[k].domain();
    L.start_boxes[k] = dom;
    L.node_boxes[k + 1] = intersect_interval(L.node_boxes[k + 1], dom);
  }
  for (const AtomTerm& a : L.mu_atoms)
    L.node_boxes[a.node] = intersect_interval(L.node_boxes[a.node],
                                              L.h.at(grid[a.node]).domain());
  for (const Interval& b : L.node_boxes)
    if (b.lo > b.hi)
      throw std::runtime_error(
          "no left-continuous feasible start: a node box is empty");
  return L;
}

double bv_piece_term(const BVLevel& L, std::size_t k, double start,
                     double end) {
  double t0 = L.grid[k], t1 = L.grid[k + 1];
  double total = L.theta.densities()[k] * (t1 - t0) * 0.5 * (start + end);
  double rho = L.mu.densities()[k];
  if (rho != 0.0) {
    double v = plq_integral_along(L.h.piece_functions()[k], t0, t1, start, end);
    if (v == kInf) return -kInf;
    total -= rho * v;
  }
  return total;
}

double bv_node_term(const BVLevel& L, std::size_t i, double v) {
  double total = 0.0;
  for (const AtomTerm& a : L.theta_atoms)
    if (a.node == i) total += a.weight * v;
  for (const AtomTerm& a : L.mu_atoms)
    if (a.node == i) {
      double hv = L.h.at(L.grid[a.node]).value(v);
      if (hv == kInf) return -kInf;
      total -= a.weight * hv;
    }
  return total;
}

double bv_objective(const BVLevel& L, const std::vector<double>& nodes,
                    const std::vector<double>& starts) {
  double total = 0.0;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    double v = bv_piece_term(L, k, starts[k], nodes[k + 1]);
    if (v == -kInf) return -kInf;
    total += v;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double v = bv_node_term(L, i, nodes[i]);
    if (v == -kInf) return -kInf;
    total += v;
  }
  return total;
}

void bv_ascent(const BVLevel& L, std::vector<double>& nodes,
               std::vector<double>& starts) {
  double prev = bv_objective(L, nodes, starts);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double lo, hi;
      search_window(L.node_boxes[i], lo, hi);
      auto local = [&](double v) {
        double total = bv_node_term(L, i, v);
        if (i > 0) total += bv_piece_term(L, i - 1, starts[i - 1], v);
        return total;
      };
      double best = argmax_concave(local, lo, hi);
      if (local(best) > local(nodes[i])) nodes[i] = best;
      if (i < starts.size()) {
        double slo, shi;
        search_window(L.start_boxes[i], slo, shi);
        auto slocal = [&](double v) {
          return bv_piece_term(L, i, v, nodes[i + 1]);
        };
        double sbest = argmax_concave(slocal, slo, shi);
        if (slocal(sbest) > slocal(starts[i])) starts[i] = sbest;
      }
    }
    double cur = bv_objective(L, nodes, starts);
    if (cur - prev < kAscentStallTol) break;
    prev = cur;
  }
}

double min_over_union(const PLQFunction& f, const IntervalUnion& set) {
  double best = kInf;
  for (const Interval& part : set.parts())
    best = std::min(best, plq_min_over(f, part));
  return best;
}

}  // namespace

BVDualityReport bv_duality(const NormalIntegrand& h, const SignedMeasure& theta,
                           const Measure& mu, int levels) {
  if (levels < 0) throw std::invalid_argument("levels must be nonnegative");
  if (!is_strictly_positive(mu))
    throw std::invalid_argument("base measure must be strictly positive");
  require_solid(h);

  std::vector<double> grid = common_grid(h, theta, mu);
  NormalIntegrand hh = h.refined(grid);
  SignedMeasure th = theta.refined(grid);
  Measure mm = mu.refined(grid);
  PiecewiseSetMap dmap = domain_map(hh);
  if (!is_inner_semicontinuous(dmap, Topology::Left).verdict)
    throw std::invalid_argument(
        "domain map must be inner semicontinuous in the left topology");

  // A function of bounded variation must fit strictly inside the domains
  // approaching every atom from the left.
  for (const Atom& a : mm.atoms()) {
    std::size_t i = node_index(grid, a.location);
    Interval da = hh.at(a.location).domain();
    if (i == 0) continue;  // value at 0 is free
    Interval dp = hh.piece_functions()[i - 1].domain();
    if (!(std::max(da.lo, dp.lo) < std::min(da.hi, dp.hi)))
      throw std::runtime_error(
          "domains pinch shut approaching an atom from the left");
  }

  Decomposition dec = lebesgue_decompose(th, mm);
  PiecewiseSetMap mli = mu_inner_limit_map(dmap, mm, Topology::Left);

  // Exact side: integral of the pointwise infimum of the tilted integrand
  // over the measure inner limit of the domain map.
  bool plus_inf = false, minus_inf = false;
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    double rho = mm.densities()[k];
    if (rho == 0.0) continue;
    double mid = 0.5 * (grid[k] + grid[k + 1]);
    double v = min_over_union(tilt(hh.piece_functions()[k], dec.piece_ratio[k]),
                              mli.value_at(mid));
    if (v == kInf) plus_inf = true;
    else if (v == -kInf) minus_inf = true;
    else integral += rho * (grid[k + 1] - grid[k]) * v;
  }
  for (std::size_t i = 0; i < mm.atoms().size(); ++i) {
    const Atom& a = mm.atoms()[i];
    double v = min_over_union(
        tilt(hh.at(a.location), dec.atom_ratio[i].weight),
        mli.value_at(a.location));
    if (v == kInf) plus_inf = true;
    else if (v == -kInf) minus_inf = true;
    else integral += a.weight * v;
  }
  for (const Atom& s : dec.singular.atoms()) {
    double sign = s.weight > 0.0 ? 1.0 : -1.0;
    double v = min_over_union(PLQFunction::affine(-sign, 0.0),
                              mli.value_at(s.location));
    if (v == kInf) plus_inf = true;
    else if (v == -kInf) minus_inf = true;
    else integral += std::abs(s.weight) * v;
  }

  BVDualityReport report;
  if (plus_inf)
    report.exact_sup = -kInf;  // no feasible function at all
  else if (minus_inf)
    report.exact_sup = kInf;
  else
    report.exact_sup = -integral;

  report.J = eval_Jhstar(hh, th, mm);
  report.left_regular =
      is_outer_mu_regular(dmap, mm, Topology::Left).verdict;

  std::vector<double> nodes, starts, prev_grid;
  for (int level = 0; level <= levels; ++level) {
    std::vector<double> g = dyadic_refine(grid, level);
    BVLevel L = build_bv_level(h, theta, mu, g);
    std::vector<double> n2(g.size()), s2(g.size() - 1);
    if (nodes.empty()) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        double lo, hi;
        search_window(L.node_boxes[i], lo, hi);
        n2[i] = 0.5 * (lo + hi);
      }
      for (std::size_t k = 0; k + 1 < g.size(); ++k) {
        double lo, hi;
        search_window(L.start_boxes[k], lo, hi);
        s2[k] = 0.5 * (lo + hi);
      }
    } else {
      PiecewiseFunction warm =
          PiecewiseFunction::left_pwa(prev_grid, nodes, starts).refined(g);
      n2 = warm.node_values();
      s2 = warm.piece_starts();
      for (std::size_t i = 0; i < g.size(); ++i) {
        double lo, hi;
        search_window(L.node_boxes[i], lo, hi);
        n2[i] = std::min(std::max(n2[i], lo), hi);
      }
      for (std::size_t k = 0; k + 1 < g.size(); ++k) {
        double lo, hi;
        search_window(L.start_boxes[k], lo, hi);
        s2[k] = std::min(std::max(s2[k], lo), hi);
      }
    }
    bv_ascent(L, n2, s2);
    report.estimates.push_back(bv_objective(L, n2, s2));
    nodes = std::move(n2);
    starts = std::move(s2);
    prev_grid = std::move(g);
  }

  double last = report.estimates.back();
  report.gap = report.exact_sup - last;
  bool monotone = nondecreasing(report.estimates);
  if (!std::isfinite(report.exact_sup))
    report.consistent = monotone;
  else
    report.consistent = monotone && last <= report.exact_sup + 1e-6 &&
                        report.gap <= kDualityGapTol;
  return report;
}

}  // namespace varsel

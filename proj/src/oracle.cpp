#include "varsel/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "varsel/tolerance.hpp"

namespace varsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ball_radius(const SampledMap& s, const OracleParams& params) {
  return std::max(std::ldexp(1.0, -params.depth), 1.5 * s.step);
}

// Index range [first, last] of samples inside the window around t. The
// limit scans span 1.5 * step per side (the grid neighbours); the measure
// scan spans 2.5 * step so that a one-sided miss still flanks a whole cell,
// whose mass then disqualifies the point. The left topology keeps only
// samples at or before t.
struct Window {
  std::size_t first = 0;
  std::size_t last = 0;
  bool empty = true;
};

Window window_around(const SampledMap& s, double t, Topology top,
                     double radius_steps) {
  const double w = radius_steps * s.step * (1.0 + 1e-9);
  const double lo = t - w;
  const double hi = top == Topology::Left ? t + 1e-9 * s.step : t + w;
  auto begin = std::lower_bound(s.tgrid.begin(), s.tgrid.end(), lo);
  auto end = std::upper_bound(s.tgrid.begin(), s.tgrid.end(), hi);
  Window win;
  if (begin == end) return win;
  win.first = static_cast<std::size_t>(begin - s.tgrid.begin());
  win.last = static_cast<std::size_t>(end - s.tgrid.begin()) - 1;
  win.empty = false;
  return win;
}

}  // namespace

SampledMap sample_map(const PiecewiseSetMap& map, double step) {
  if (!(step > 0.0) || step > 1.0)
    throw std::invalid_argument("sample step must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
  SampledMap s;
  s.step = 1.0 / static_cast<double>(n);
  s.tgrid.reserve(n + 1);
  s.values.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    s.tgrid.push_back(t);
    s.values.push_back(map.value_at(t));
  }
  return s;
}

bool oracle_accepts(const SampledMap& s, double t, double x, LimitKind kind,
                    Topology top, const OracleParams& params) {
  const Window win = window_around(s, t, top, 1.5);
  if (win.empty) return false;
  const double eps = ball_radius(s, params);
  if (kind == LimitKind::Inner) {
    for (std::size_t i = win.first; i <= win.last; ++i)
      if (s.values[i].distance_to(x) > eps) return false;
    return true;
  }
  for (std::size_t i = win.first; i <= win.last; ++i)
    if (s.values[i].distance_to(x) <= eps) return true;
  return false;
}

bool oracle_mli_accepts(const SampledMap& s, double t, double x,
                        const Measure& mu, Topology top,
                        const OracleParams& params) {
  const Window win = window_around(s, t, top, 2.5);
  if (win.empty) return false;
  const double eps = ball_radius(s, params);
  std::vector<char> miss(win.last - win.first + 1, 0);
  for (std::size_t i = win.first; i <= win.last; ++i)
    miss[i - win.first] = s.values[i].distance_to(x) > eps ? 1 : 0;

  double bad = 0.0;
  for (std::size_t i = win.first; i <= win.last; ++i) {
    if (miss[i - win.first]) bad += mu.atom_weight_at(s.tgrid[i]);
    if (i < win.last && miss[i - win.first] && miss[i + 1 - win.first]) {
      BorelSet gap{SetPiece{s.tgrid[i], s.tgrid[i + 1], false, false}};
      bad += measure_of(mu, gap);
    }
  }
  // Left windows may stop short of an off-grid t; charge the unsampled tail
  // to its only sampled end.
  if (top == Topology::Left && s.tgrid[win.last] < t && miss[win.last - win.first]) {
    BorelSet tail{SetPiece{s.tgrid[win.last], std::min(t, 1.0), false, true}};
    bad += measure_of(mu, tail);
  }
  return bad <= kNullMeasureTol;
}

namespace {

IntervalUnion scan_accepted(
    const SampledMap& s, double t, Topology top, double radius_steps,
    const std::function<bool(double)>& accepts) {
  const Window win = window_around(s, t, top, radius_steps);
  if (win.empty) return IntervalUnion::empty();

  double xlo = kInf;
  double xhi = -kInf;
  std::vector<double> candidates;
  for (std::size_t i = win.first; i <= win.last; ++i) {
    for (const Interval& part : s.values[i].parts()) {
      const double a = std::max(part.lo, -kClipBound);
      const double b = std::min(part.hi, kClipBound);
      if (a > b) continue;
      xlo = std::min(xlo, a);
      xhi = std::max(xhi, b);
      candidates.push_back(a);
      candidates.push_back(b);
    }
  }
  if (xlo > xhi) return IntervalUnion::empty();
  xlo = std::max(xlo - 2.0 * s.step, -kClipBound);
  xhi = std::min(xhi + 2.0 * s.step, kClipBound);
  for (double x = xlo; x <= xhi + 0.5 * s.step; x += s.step)
    candidates.push_back(std::min(x, xhi));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [&](double a, double b) {
                                 return b - a <= 1e-9 * s.step;
                               }),
                   candidates.end());

  std::vector<Interval> runs;
  bool open = false;
  double run_lo = 0.0;
  double run_hi = 0.0;
  double prev = 0.0;
  for (double x : candidates) {
    const bool ok = accepts(x);
    if (ok && open && x - prev <= 1.5 * s.step) {
      run_hi = x;
    } else if (ok) {
      if (open) runs.push_back(Interval{run_lo, run_hi});
      run_lo = x;
      run_hi = x;
      open = true;
    } else if (open) {
      runs.push_back(Interval{run_lo, run_hi});
      open = false;
    }
    if (ok) prev = x;
  }
  if (open) runs.push_back(Interval{run_lo, run_hi});
  return IntervalUnion(std::move(runs));
}

}  // namespace

IntervalUnion oracle_limits(const SampledMap& s, double t, LimitKind kind,
                            Topology top, const OracleParams& params) {
  return scan_accepted(s, t, top, 1.5, [&](double x) {
    return oracle_accepts(s, t, x, kind, top, params);
  });
}

IntervalUnion oracle_mli(const SampledMap& s, double t, const Measure& mu,
                         Topology top, const OracleParams& params) {
  return scan_accepted(s, t, top, 2.5, [&](double x) {
    return oracle_mli_accepts(s, t, x, mu, top, params);
  });
}

std::vector<double> oracle_conjugate(const PLQFunction& f, double xlo,
                                     double xhi, std::size_t nx,
                                     const std::vector<double>& vgrid) {
  if (!(xlo <= xhi) || nx == 0)
    throw std::invalid_argument("conjugate scan needs xlo <= xhi and nx > 0");
  std::vector<double> out;
  out.reserve(vgrid.size());
  for (double v : vgrid) {
    double best = -kInf;
    for (std::size_t j = 0; j <= nx; ++j) {
      const double x =
          xlo + (xhi - xlo) * static_cast<double>(j) / static_cast<double>(nx);
      const double fx = f.value(x);
      if (!std::isfinite(fx)) continue;
      best = std::max(best, x * v - fx);
    }
    out.push_back(best);
  }
  return out;
}

double oracle_integral_functional(const NormalIntegrand& h,
                                  const PiecewiseFunction& y,
                                  const Measure& mu, std::size_t n) {
  if (n == 0) throw std::invalid_argument("Riemann sum needs n > 0");
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double m =
        (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    const double rho = mu.density_at(m);
    if (rho == 0.0) continue;
    const double val = h.at(m).value(y.value_at(m));
    if (val == kInf) return kInf;
    sum += val * rho / static_cast<double>(n);
  }
  for (const Atom& a : mu.atoms()) {
    const double val = h.at(a.location).value(y.value_at(a.location));
    if (val == kInf) return kInf;
    sum += val * a.weight;
  }
  return sum;
}

}  // namespace varsel

// End-to-end acceptance gate. Each criterion prints one PASS/FAIL line with
// a short reason; the exit code is the number of failures. Tolerances are
// pinned here on purpose: 2 * step for sampled set comparisons, 1e-3 for
// refined dual gaps, 1e-6 for exact-arithmetic comparisons, 1e-9 for
// representation equality.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "varsel/duality.hpp"
#include "varsel/integrand.hpp"
#include "varsel/interval.hpp"
#include "varsel/measure.hpp"
#include "varsel/oracle.hpp"
#include "varsel/plq.hpp"
#include "varsel/selection.hpp"
#include "varsel/setmap.hpp"

using namespace varsel;
using namespace varsel::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void line(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// 1. Verdicts on the radius jump, under a second.
void criterion1() {
  const auto t0 = Clock::now();
  PiecewiseSetMap m = radius_jump_map();
  const Measure leb = Measure::lebesgue();

  bool ok = is_outer_mu_regular(m, leb_atom_half()).verdict;
  ok = ok && !is_outer_mu_regular(m, leb).verdict;
  ok = ok && !is_fully_lsc(m).verdict;
  ok = ok && is_inner_semicontinuous(m).verdict;
  const double el = seconds_since(t0);
  ok = ok && el < 1.0;
  line(1, ok, "radius-jump verdicts (atom regular, plain not, not fully lsc, isc) in " + fmt(el) + "s");
}

// 2. Staircase truncations: sampled measure limits and the witness at 0.
void criterion2() {
  const auto t0 = Clock::now();
  const Measure leb = Measure::lebesgue();
  OracleParams p;
  p.step = std::ldexp(1.0, -12);

  bool ok = true;
  double prev_excess = 2.0;
  std::string detail;
  for (int N : {6, 8, 10}) {
    PiecewiseSetMap m = make_staircase(N);
    SampledMap s = sample_map(m, p.step);
    for (int n = 1; n <= N; ++n) {
      const double t = std::ldexp(1.0, -n);
      IntervalUnion ml = oracle_mli(s, t, leb, Topology::Standard, p);
      if (hausdorff(ml, IntervalUnion::single(1, 2)) > 2 * p.step) {
        ok = false;
        detail = "sampled mli off at t=2^-" + std::to_string(n) +
                 " N=" + std::to_string(N);
      }
    }
    // The exact measure limit at 0 approaches {0} u [1,2] as N grows.
    IntervalUnion at0 = mu_inner_limit(m, 0.0, leb);
    IntervalUnion target({{0.0, 0.0}, {1.0, 2.0}});
    const double exc = excess(target, at0);
    if (exc > std::ldexp(1.0, -N)) {
      ok = false;
      detail = "witness at 0 too far for N=" + std::to_string(N);
    }
    if (exc >= prev_excess) {
      ok = false;
      detail = "witness distance not improving at N=" + std::to_string(N);
    }
    prev_excess = exc;
  }
  const double el = seconds_since(t0);
  ok = ok && el < 30.0;
  line(2, ok,
       detail.empty() ? "staircase truncations N=6,8,10 at step 2^-12 in " + fmt(el) + "s"
                      : detail);
}

// 3. Outer regularity in measure is exactly "no essential counterexample".
void criterion3() {
  std::mt19937_64 rng(390625);
  bool ok = true;
  int regular = 0, irregular = 0;
  std::string detail;
  for (int it = 0; it < 500 && ok; ++it) {
    PiecewiseSetMap m = random_isc_solid_map(rng);
    Measure mu = random_measure(rng, m.grid());
    const bool reg = is_outer_mu_regular(m, mu).verdict;
    auto ce = essential_selection_counterexample(m, mu);
    if (reg == ce.has_value()) {
      ok = false;
      detail = "verdict and counterexample disagree at instance " + std::to_string(it);
      break;
    }
    if (ce) {
      ++irregular;
      if (check_essential_selection(m, *ce, mu).kind !=
          SelectionClass::EssentialOnly) {
        ok = false;
        detail = "counterexample not essential-only at instance " + std::to_string(it);
      }
    } else {
      ++regular;
      PiecewiseSetMap mli = mu_inner_limit_map(m, mu);
      for (int a = 0; a < 3; ++a) {
        const auto& grid = mli.grid();
        const double t = grid[static_cast<std::size_t>(
            uniform_int(rng, 0, static_cast<int>(grid.size()) - 1))];
        IntervalUnion val = mli.value_at(t);
        const Interval& part = val.parts()[0];
        Anchor anchor{t, part.lo + uniform(rng, 0.1, 0.9) * part.length()};
        PiecewiseFunction y = continuous_selection(mli, anchor);
        if (check_essential_selection(m, y, mu).kind !=
            SelectionClass::Selection) {
          ok = false;
          detail = "essential selection escapes at instance " + std::to_string(it);
        }
      }
    }
  }
  ok = ok && regular >= 50 && irregular >= 50;
  if (detail.empty() && !(regular >= 50 && irregular >= 50))
    detail = "family too lopsided: " + std::to_string(regular) + " regular / " +
             std::to_string(irregular) + " irregular";
  line(3, ok,
       detail.empty() ? "500 instances, " + std::to_string(regular) +
                            " regular / " + std::to_string(irregular) +
                            " irregular, equivalence holds"
                      : detail);
}

// 4. The measure inner limit map is a projection onto isc solid maps.
void criterion4() {
  std::mt19937_64 rng(160000);
  bool ok = true;
  std::string detail;
  for (int it = 0; it < 500 && ok; ++it) {
    PiecewiseSetMap m = random_isc_solid_map(rng);
    Measure mu = random_measure(rng, m.grid());
    PiecewiseSetMap m1 = mu_inner_limit_map(m, mu);
    PiecewiseSetMap m2 = mu_inner_limit_map(m1, mu);

    for (std::size_t i = 0; i < m1.grid().size(); ++i)
      if (!identical_sets(m1.breakpoint_values()[i], m2.breakpoint_values()[i])) {
        ok = false;
        detail = "not idempotent at instance " + std::to_string(it);
      }
    for (std::size_t k = 0; k + 1 < m.grid().size(); ++k) {
      const double t = 0.5 * (m.grid()[k] + m.grid()[k + 1]);
      if (!identical_sets(m1.value_at(t), m.value_at(t))) {
        ok = false;
        detail = "changed off the grid at instance " + std::to_string(it);
      }
    }
    if (!is_inner_semicontinuous(m1).verdict || !m1.convex_valued()) {
      ok = false;
      detail = "projection not isc convex at instance " + std::to_string(it);
    }
    for (const IntervalUnion& v : m1.breakpoint_values())
      if (v.is_empty() || v.parts()[0].length() <= 0.0) {
        ok = false;
        detail = "projection not solid at instance " + std::to_string(it);
      }
  }
  line(4, ok, detail.empty() ? "500 instances: idempotent, identity off a finite set, isc solid convex" : detail);
}

// 5. Values at finitely many non-atom points never matter.
void criterion5() {
  std::mt19937_64 rng(3125);
  bool ok = true;
  std::string detail;
  for (int it = 0; it < 200 && ok; ++it) {
    PiecewiseSetMap m = random_isc_solid_map(rng);
    Measure mu = random_measure(rng, m.grid());

    std::vector<double> extra;
    for (std::size_t k = 0; k + 1 < m.grid().size() && extra.size() < 5; ++k) {
      const double t =
          m.grid()[k] + uniform(rng, 0.2, 0.8) * (m.grid()[k + 1] - m.grid()[k]);
      if (mu.atom_weight_at(t) == 0.0) extra.push_back(t);
    }
    if (extra.empty()) continue;

    std::vector<double> supergrid = merge_grids({m.grid(), extra});
    PiecewiseSetMap pert = m.refined(supergrid);
    for (double t : extra)
      for (std::size_t i = 0; i < supergrid.size(); ++i)
        if (supergrid[i] == t)
          pert = pert.with_breakpoint_value(
              i, unite(IntervalUnion::point(10.0 + t),
                       IntervalUnion::single(-9.0, -8.5)));

    PiecewiseSetMap a = mu_inner_limit_map(m, mu);
    PiecewiseSetMap b = mu_inner_limit_map(pert, mu);
    std::vector<double> probes = supergrid;
    for (std::size_t k = 0; k + 1 < supergrid.size(); ++k)
      probes.push_back(0.5 * (supergrid[k] + supergrid[k + 1]));
    for (double t : probes)
      if (!identical_sets(a.value_at(t), b.value_at(t))) {
        ok = false;
        detail = "measure limit moved at t=" + fmt(t) + " instance " + std::to_string(it);
      }
  }
  line(5, ok, detail.empty() ? "200 instances x 5 perturbed points: measure limits bit-identical" : detail);
}

// 6. Fully lsc maps are outer regular for every strictly positive measure.
void criterion6() {
  std::mt19937_64 rng(64000000);
  bool ok = true;
  std::string detail;
  for (int it = 0; it < 200 && ok; ++it) {
    PiecewiseSetMap m = random_fully_lsc_map(rng);
    if (!is_fully_lsc(m).verdict) {
      ok = false;
      detail = "generator produced a non fully-lsc tube at " + std::to_string(it);
      break;
    }
    for (int j = 0; j < 5; ++j) {
      Measure mu = random_measure(rng, m.grid());
      if (!is_outer_mu_regular(m, mu).verdict) {
        ok = false;
        detail = "fully lsc instance " + std::to_string(it) + " not outer regular";
      }
    }
  }
  line(6, ok, detail.empty() ? "200 fully lsc tubes x 5 measures: all outer regular" : detail);
}

// 7. Conjugation: involution on the class, and grid suprema agree.
void criterion7() {
  std::mt19937_64 rng(823543);
  bool ok = true;
  std::string detail;
  for (int it = 0; it < 1000 && ok; ++it) {
    PLQFunction f = random_plq(rng);
    if (!plq_equal(conjugate(conjugate(f)), f, 1e-9)) {
      ok = false;
      detail = "biconjugate differs at instance " + std::to_string(it);
    }
  }
  const std::size_t per_unit = 1u << 16;
  for (int it = 0; it < 200 && ok; ++it) {
    PLQFunction f = random_plq_dyadic(rng);
    const double lo = f.domain().lo, hi = f.domain().hi;
    const std::size_t nx =
        static_cast<std::size_t>(std::llround((hi - lo) * per_unit));
    std::vector<double> vgrid;
    for (int j = -6; j <= 6; ++j) vgrid.push_back(0.5 * j);
    std::vector<double> got = oracle_conjugate(f, lo, hi, nx, vgrid);
    PLQFunction fc = conjugate(f);
    for (std::size_t i = 0; i < vgrid.size(); ++i)
      if (std::fabs(got[i] - fc.value(vgrid[i])) > 1e-6) {
        ok = false;
        detail = "grid supremum off by " +
                 fmt(std::fabs(got[i] - fc.value(vgrid[i]))) + " at v=" +
                 fmt(vgrid[i]);
      }
  }
  line(7, ok, detail.empty() ? "1000 biconjugates exact, 200 grid-sup comparisons within 1e-6" : detail);
}

// 8. Integral-functional duality on the worked instances.
void criterion8() {
  const auto t0 = Clock::now();
  const Measure leb = Measure::lebesgue();
  SignedMeasure dirac05({0.0, 1.0}, {0.0}, {Atom{0.5, 1.0}});
  SignedMeasure flat({0.0, 1.0}, {1.0}, {});
  bool ok = true;
  std::string detail;

  DualityReport pinched = duality_report(pinched_box(), dirac05, leb, 8);
  if (!(pinched.J == 1.0 && pinched.estimates.back() >= 1.99 &&
        !pinched.regular && pinched.consistent)) {
    ok = false;
    detail = "pinched box: J=" + fmt(pinched.J) + " last=" + fmt(pinched.estimates.back());
  }

  DualityReport wide = duality_report(
      NormalIntegrand::constant(box_indicator(2)), dirac05, leb, 8);
  if (!(wide.regular && wide.consistent && std::fabs(wide.gap) <= 1e-3)) {
    ok = false;
    detail = "wide box gap " + fmt(wide.gap);
  }

  DualityReport quad = duality_report(
      NormalIntegrand::constant(PLQFunction::quadratic(1, 0, 0)), flat, leb, 8);
  if (!(quad.regular && quad.consistent && std::fabs(quad.gap) <= 1e-6)) {
    ok = false;
    detail = "quadratic gap " + fmt(quad.gap);
  }

  const double el = seconds_since(t0);
  ok = ok && el < 60.0;
  line(8, ok,
       detail.empty() ? "dual gaps: pinched overshoot, wide <=1e-3, quadratic <=1e-6 in " + fmt(el) + "s"
                      : detail);
}

// 9. Bounded-variation duality: exact supremum vs refined estimates.
void criterion9() {
  const Measure leb = Measure::lebesgue();
  SignedMeasure dirac03({0.0, 1.0}, {0.0}, {Atom{0.3, 1.0}});
  PLQFunction wide = box_indicator(2);
  PLQFunction narrow = box_indicator(1);
  bool ok = true;
  std::string detail;

  NormalIntegrand shrink({0.0, 0.3, 1.0}, {wide, narrow}, {wide, narrow, narrow});
  BVDualityReport s = bv_duality(shrink, dirac03, leb, 6);
  if (!(std::fabs(s.exact_sup - s.estimates.back()) <= 1e-3 &&
        s.estimates.back() >= 1.99 && s.J == 1.0 && !s.left_regular &&
        s.consistent)) {
    ok = false;
    detail = "shrinking domains: sup=" + fmt(s.exact_sup) + " last=" +
             fmt(s.estimates.back()) + " J=" + fmt(s.J);
  }

  NormalIntegrand grow({0.0, 0.3, 1.0}, {narrow, wide}, {narrow, narrow, wide});
  BVDualityReport g = bv_duality(grow, dirac03, leb, 6);
  if (!(std::fabs(g.exact_sup - g.estimates.back()) <= 1e-3 &&
        std::fabs(g.exact_sup - g.J) <= 1e-3 && g.left_regular && g.consistent)) {
    ok = false;
    detail = "growing domains: sup=" + fmt(g.exact_sup) + " J=" + fmt(g.J);
  }

  line(9, ok,
       detail.empty() ? "exact vs refined suprema within 1e-3; irregular jump beats J (2 > 1)"
                      : detail);
}

// 10. Sampled limit sets converge at the promised rate.
void criterion10() {
  const double steps[3] = {std::ldexp(1.0, -8), std::ldexp(1.0, -10),
                           std::ldexp(1.0, -12)};
  bool ok = true;
  std::string detail;

  struct Probe {
    PiecewiseSetMap map;
    std::vector<double> points;
  };
  std::vector<Probe> probes;
  probes.push_back({radius_jump_map(), {0.0, 0.25, 0.5, 1.0}});
  probes.push_back({make_staircase(6), {0.125, 0.25, 0.5}});

  for (const Probe& pr : probes) {
    for (double t : pr.points) {
      double prev_li = -1.0, prev_ls = -1.0;
      for (double step : steps) {
        OracleParams p;
        p.step = step;
        SampledMap s = sample_map(pr.map, step);
        const double hli =
            hausdorff(oracle_limits(s, t, LimitKind::Inner, Topology::Standard, p),
                      inner_limit(pr.map, t));
        const double hls =
            hausdorff(oracle_limits(s, t, LimitKind::Outer, Topology::Standard, p),
                      outer_limit(pr.map, t));
        if (hli > 2 * step || hls > 2 * step) {
          ok = false;
          detail = "sampled set off by li=" + fmt(hli) + " ls=" + fmt(hls) +
                   " at t=" + fmt(t) + " step=" + fmt(step);
        }
        if (prev_li >= 0 && (hli > prev_li + 1e-15 || hls > prev_ls + 1e-15)) {
          ok = false;
          detail = "error grew from step " + fmt(2 * step) + " to " + fmt(step) +
                   " at t=" + fmt(t);
        }
        prev_li = hli;
        prev_ls = hls;
      }
    }
  }
  line(10, ok,
       detail.empty() ? "sampled inner/outer limits within 2*step, improving from 2^-8 to 2^-12"
                      : detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria failed\n", failures);
  return failures;
}

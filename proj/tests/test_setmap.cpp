#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "varsel/setmap.hpp"

using namespace varsel;
using namespace varsel::testing;

TEST_CASE("affine components and piecewise evaluation") {
  PiecewiseSetMap m = radius_jump_map();
  CHECK(m.is_breakpoint(0.5));
  CHECK(!m.is_breakpoint(0.25));
  CHECK(identical_sets(m.value_at(0.5), IntervalUnion::single(-1, 1)));
  CHECK(identical_sets(m.value_at(0.25), IntervalUnion::single(-2, 2)));
  CHECK(identical_sets(m.piece_limit(0, 0.5), IntervalUnion::single(-2, 2)));
  CHECK(m.convex_valued());
  CHECK(m.nonempty_valued());

  // Touching components merge in piece_limit.
  PiecewiseSetMap two({0.0, 1.0},
                      {{AffineComponent{0.0, 0.0, 0.5, 0.0},
                        AffineComponent{0.5, 0.0, 1.0, 0.0}}},
                      {IntervalUnion::single(0, 1), IntervalUnion::single(0, 1)});
  CHECK(two.piece_limit(0, 0.5).is_single_interval());
}

TEST_CASE("limit operators at a shrinking breakpoint") {
  PiecewiseSetMap m = radius_jump_map();
  const Measure leb = Measure::lebesgue();
  const Measure withAtom = leb_atom_half();

  CHECK(identical_sets(inner_limit(m, 0.5), IntervalUnion::single(-1, 1)));
  CHECK(identical_sets(outer_limit(m, 0.5), IntervalUnion::single(-2, 2)));
  CHECK(identical_sets(mu_inner_limit(m, 0.5, leb), IntervalUnion::single(-2, 2)));
  // An atom at the point makes the value itself visible in measure.
  CHECK(identical_sets(mu_inner_limit(m, 0.5, withAtom),
                       IntervalUnion::single(-1, 1)));

  // Interior of a piece: everything equals the value.
  for (double t : {0.25, 0.75}) {
    CHECK(identical_sets(inner_limit(m, t), m.value_at(t)));
    CHECK(identical_sets(outer_limit(m, t), m.value_at(t)));
    CHECK(identical_sets(mu_inner_limit(m, t, leb), m.value_at(t)));
  }
}

TEST_CASE("left topology drops the right-hand side") {
  PiecewiseSetMap m = radius_jump_map();
  const Measure leb = Measure::lebesgue();

  CHECK(identical_sets(inner_limit(m, 0.5, Topology::Left),
                       IntervalUnion::single(-1, 1)));
  CHECK(identical_sets(mu_inner_limit(m, 0.5, leb, Topology::Left),
                       IntervalUnion::single(-2, 2)));

  // {0} is open for the left topology, so t = 0 sees only its own value.
  PiecewiseSetMap shifted = m.with_breakpoint_value(0, IntervalUnion::point(0.0));
  CHECK(identical_sets(inner_limit(shifted, 0.0, Topology::Left),
                       IntervalUnion::point(0.0)));
  CHECK(identical_sets(outer_limit(shifted, 0.0, Topology::Left),
                       IntervalUnion::point(0.0)));
  CHECK(identical_sets(mu_inner_limit(shifted, 0.0, leb, Topology::Left),
                       IntervalUnion::point(0.0)));

  // Standard topology at 0 keeps the right-hand limit.
  CHECK(identical_sets(inner_limit(shifted, 0.0), IntervalUnion::point(0.0)));
  CHECK(identical_sets(outer_limit(shifted, 0.0), IntervalUnion::single(-2, 2)));
  CHECK(identical_sets(mu_inner_limit(shifted, 0.0, leb),
                       IntervalUnion::single(-2, 2)));
}

TEST_CASE("endpoint t = 1 uses only the left side") {
  PiecewiseSetMap m = radius_jump_map().with_breakpoint_value(
      2, IntervalUnion::single(-3, 3));
  CHECK(identical_sets(inner_limit(m, 1.0), IntervalUnion::single(-2, 2)));
  CHECK(identical_sets(outer_limit(m, 1.0), IntervalUnion::single(-3, 3)));
  CHECK(identical_sets(mu_inner_limit(m, 1.0, Measure::lebesgue()),
                       IntervalUnion::single(-2, 2)));
}

TEST_CASE("regularity verdicts on the radius jump") {
  PiecewiseSetMap m = radius_jump_map();
  const Measure leb = Measure::lebesgue();

  CHECK(is_inner_semicontinuous(m).verdict);
  CHECK(!is_outer_semicontinuous(m).verdict);

  RegularityReport outer = is_outer_mu_regular(m, leb);
  CHECK(!outer.verdict);
  REQUIRE(!outer.violations.empty());
  CHECK(outer.violations[0].t == 0.5);
  CHECK(outer.violations[0].x == 2.0);
  CHECK(outer.violations[0].violation == doctest::Approx(1.0));
  CHECK(outer.violations[0].kind == WitnessKind::MeasureLimitEscape);

  CHECK(is_outer_mu_regular(m, leb_atom_half()).verdict);

  RegularityReport full = is_fully_lsc(m);
  CHECK(!full.verdict);
  REQUIRE(!full.violations.empty());
  CHECK(full.violations[0].kind == WitnessKind::DensityEscape);
}

TEST_CASE("staircase truncation limits") {
  PiecewiseSetMap m = make_staircase(6);
  const Measure leb = Measure::lebesgue();

  IntervalUnion expected_value({{0.25, 0.25}, {0.5, 0.5}, {1.0, 2.0}});
  CHECK(identical_sets(m.value_at(0.25), expected_value));
  CHECK(identical_sets(inner_limit(m, 0.25), IntervalUnion::single(1, 2)));
  CHECK(identical_sets(outer_limit(m, 0.25), expected_value));
  CHECK(identical_sets(mu_inner_limit(m, 0.25, leb), IntervalUnion::single(1, 2)));

  // At 0 the right-hand limit carries the frozen lowest stair.
  IntervalUnion at0({{0.0078125, 0.0078125}, {1.0, 2.0}});
  CHECK(identical_sets(m.value_at(0.0), at0));
  CHECK(identical_sets(inner_limit(m, 0.0), at0));
  CHECK(identical_sets(outer_limit(m, 0.0), at0));
  CHECK(identical_sets(mu_inner_limit(m, 0.0, leb), at0));

  // Finite truncations are closed (each stair point persists up to its
  // node), but the stair points escape every inner limit.
  CHECK(is_outer_semicontinuous(m).verdict);
  CHECK(!is_inner_semicontinuous(m).verdict);
}

TEST_CASE("measure inner limit map is idempotent and isc") {
  std::mt19937_64 rng(90210);
  for (int it = 0; it < 60; ++it) {
    PiecewiseSetMap m = random_isc_solid_map(rng);
    Measure mu = random_measure(rng, m.grid());

    PiecewiseSetMap m1 = mu_inner_limit_map(m, mu);
    PiecewiseSetMap m2 = mu_inner_limit_map(m1, mu);

    REQUIRE(m1.grid() == m.grid());
    REQUIRE(m2.grid() == m1.grid());
    for (std::size_t i = 0; i < m1.grid().size(); ++i)
      CHECK(identical_sets(m1.breakpoint_values()[i], m2.breakpoint_values()[i]));

    // Off the grid nothing changes.
    for (std::size_t k = 0; k + 1 < m.grid().size(); ++k) {
      double t = 0.5 * (m.grid()[k] + m.grid()[k + 1]);
      CHECK(identical_sets(m1.value_at(t), m.value_at(t)));
    }

    CHECK(is_inner_semicontinuous(m1).verdict);
    CHECK(m1.convex_valued());
    for (const IntervalUnion& v : m1.breakpoint_values()) {
      REQUIRE(!v.is_empty());
      CHECK(v.parts()[0].length() > 0.0);  // solid
    }
  }
}

TEST_CASE("perturbation at non-atom points leaves the measure limit alone") {
  std::mt19937_64 rng(1337);
  for (int it = 0; it < 40; ++it) {
    PiecewiseSetMap m = random_isc_solid_map(rng);
    Measure mu = random_measure(rng, m.grid());

    // Pick perturbation points strictly inside pieces, away from atoms.
    std::vector<double> extra;
    for (std::size_t k = 0; k + 1 < m.grid().size() && extra.size() < 5; ++k) {
      double t = m.grid()[k] + 0.37 * (m.grid()[k + 1] - m.grid()[k]);
      if (mu.atom_weight_at(t) == 0.0) extra.push_back(t);
    }
    REQUIRE(!extra.empty());

    std::vector<double> supergrid = merge_grids({m.grid(), extra});
    PiecewiseSetMap pert = m.refined(supergrid);
    for (double t : extra) {
      for (std::size_t i = 0; i < supergrid.size(); ++i) {
        if (supergrid[i] != t) continue;
        IntervalUnion weird =
            unite(IntervalUnion::point(50.0 + t), IntervalUnion::point(-77.0));
        pert = pert.with_breakpoint_value(i, weird);
      }
    }

    PiecewiseSetMap a = mu_inner_limit_map(m, mu);
    PiecewiseSetMap b = mu_inner_limit_map(pert, mu);
    for (double t : m.grid()) CHECK(identical_sets(a.value_at(t), b.value_at(t)));
    for (double t : extra) CHECK(identical_sets(a.value_at(t), b.value_at(t)));
    for (std::size_t k = 0; k + 1 < supergrid.size(); ++k) {
      double t = 0.5 * (supergrid[k] + supergrid[k + 1]);
      CHECK(identical_sets(a.value_at(t), b.value_at(t)));
    }
  }
}

TEST_CASE("essential supremum unions values by measure") {
  PiecewiseSetMap a = PiecewiseSetMap::constant(IntervalUnion::single(0, 1));
  PiecewiseSetMap b = PiecewiseSetMap::constant(IntervalUnion::single(2, 3));
  IntervalUnion both({{0.0, 1.0}, {2.0, 3.0}});

  PiecewiseSetMap s = mu_essential_supremum({a, b}, Measure::lebesgue());
  CHECK(identical_sets(s.value_at(0.3), both));
  CHECK(identical_sets(s.value_at(0.0), both));
  CHECK(identical_sets(s.value_at(1.0), both));

  // A deviation at a single point survives only under an atom there.
  PiecewiseSetMap a2({0.0, 0.5, 1.0},
                     {{AffineComponent{0.0, 0.0, 1.0, 0.0}},
                      {AffineComponent{0.0, 0.0, 1.0, 0.0}}},
                     {IntervalUnion::single(0, 1), IntervalUnion::single(0, 5),
                      IntervalUnion::single(0, 1)});
  PiecewiseSetMap s2 = mu_essential_supremum({a2, b}, Measure::lebesgue());
  CHECK(identical_sets(s2.value_at(0.5), both));
  PiecewiseSetMap s3 = mu_essential_supremum({a2, b}, leb_atom_half());
  CHECK(identical_sets(s3.value_at(0.5), IntervalUnion::single(0, 5)));
}

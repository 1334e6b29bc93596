#pragma once

#include <optional>
#include <vector>

#include "varsel/measure.hpp"
#include "varsel/pwfun.hpp"
#include "varsel/setmap.hpp"

namespace varsel {

struct Anchor {
  double t = 0.0;
  double x = 0.0;
};

// Continuous piecewise-affine selection of an inner-semicontinuous,
// convex- and nonempty-valued map, optionally through an anchor point.
// Node policy: the anchor value projected onto each node's value when an
// anchor is given, midpoints otherwise.
PiecewiseFunction continuous_selection(const PiecewiseSetMap& map,
                                       std::optional<Anchor> anchor = {});

struct MichaelFamily {
  std::vector<PiecewiseFunction> selections;
  // max over sampled t of the excess of the clipped value over the family.
  double covering_distance = 0.0;
};

// n continuous selections spread along a dyadic ladder of the value tubes.
MichaelFamily michael_representation(const PiecewiseSetMap& map, int n);

enum class SelectionClass { Selection, EssentialOnly, NotEssential };

struct SelectionReport {
  SelectionClass kind = SelectionClass::Selection;
  BorelSet violation;  // where y_t escapes the value, exact up to set_tol()
  double violation_measure = 0.0;
};

SelectionReport check_essential_selection(const PiecewiseSetMap& map,
                                          const PiecewiseFunction& y,
                                          const Measure& mu);

// For a map failing outer regularity in measure: a continuous function that
// selects from the map almost everywhere but escapes the closed value at a
// witness point. Empty when the map is outer regular for mu.
std::optional<PiecewiseFunction> essential_selection_counterexample(
    const PiecewiseSetMap& map, const Measure& mu,
    Topology top = Topology::Standard);

}  // namespace varsel

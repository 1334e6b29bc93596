#pragma once

#include <optional>
#include <vector>

#include "varsel/interval.hpp"
#include "varsel/measure.hpp"

namespace varsel {

// Topologies on [0,1]. Standard is the usual interval topology; Left is the
// lower-limit topology generated by half-open intervals (s, t], under which
// {0} is open in [0,1].
enum class Topology { Standard, Left };

enum class Side { Left, Right };

// One closed-interval component with affine endpoint motion:
// [a0 + a1 t, b0 + b1 t]. Infinite constant endpoints are allowed (the
// slope is ignored on an infinite side).
struct AffineComponent {
  double a0 = 0.0, a1 = 0.0;
  double b0 = 0.0, b1 = 0.0;
  Interval at(double t) const;
};

// Set-valued map on [0,1] with closed-interval-union values: affine
// components on each open grid piece and explicit values at grid points.
//
// Limit operators. For x in R, the inner limit at t collects the points
// whose every neighborhood is eventually met by Gamma along every net
// converging to t; the outer limit collects cluster values; the measure
// inner limit replaces "every neighborhood of t" by "every set meeting each
// neighborhood of t in positive measure". On [0,1] with piecewise-affine
// components these reduce to one-sided limit sets, written L and R for the
// limits of the adjacent piece formulas at t:
//
//   inner limit          cl G(t) n L n R
//   outer limit          cl G(t) u L u R
//   measure inner limit  L n R, intersected with cl G(t) iff mu({t}) > 0
//
// Sketch: {t} meets every neighborhood of t, so the plain limits see the
// value at t itself, while a singleton has positive measure only at an
// atom. Any set accumulating at t from the right contains points of every
// (t, t+d); since the components converge one-sidedly, the cluster set
// along any such set is exactly R, and full-measure accumulation from the
// right gives R as well because a strictly positive density makes every
// (t, t+d) have positive mass and the miss-set of any ball around a point
// of R is eventually a finite point set. The left side is symmetric. Under
// the Left topology the right side drops out, and at t = 0 the singleton
// {0} is itself open, so all three operators collapse to cl G(0).
// Interior points of pieces are continuity points, so every verdict below
// only needs to inspect grid points.
class PiecewiseSetMap {
 public:
  PiecewiseSetMap() = default;
  PiecewiseSetMap(std::vector<double> grid,
                  std::vector<std::vector<AffineComponent>> pieces,
                  std::vector<IntervalUnion> breakpoint_values);

  static PiecewiseSetMap constant(const IntervalUnion& value);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<std::vector<AffineComponent>>& pieces() const {
    return pieces_;
  }
  const std::vector<IntervalUnion>& breakpoint_values() const {
    return breakpoint_values_;
  }

  bool is_breakpoint(double t) const;
  IntervalUnion value_at(double t) const;
  // Components of piece k evaluated at t, merged where touching.
  IntervalUnion piece_limit(std::size_t k, double t) const;

  PiecewiseSetMap refined(const std::vector<double>& supergrid) const;
  PiecewiseSetMap with_breakpoint_value(std::size_t index,
                                        IntervalUnion value) const;

  bool convex_valued() const;   // every value a single interval or empty
  bool nonempty_valued() const;

 private:
  std::vector<double> grid_{0.0, 1.0};
  std::vector<std::vector<AffineComponent>> pieces_{{}};
  std::vector<IntervalUnion> breakpoint_values_{IntervalUnion::empty(),
                                                IntervalUnion::empty()};
};

IntervalUnion one_sided_limit_set(const PiecewiseSetMap& map, double t,
                                  Side side);
IntervalUnion inner_limit(const PiecewiseSetMap& map, double t,
                          Topology top = Topology::Standard);
IntervalUnion outer_limit(const PiecewiseSetMap& map, double t,
                          Topology top = Topology::Standard);
IntervalUnion mu_inner_limit(const PiecewiseSetMap& map, double t,
                             const Measure& mu,
                             Topology top = Topology::Standard);

// The map t -> measure inner limit of `map` at t, as a PiecewiseSetMap.
PiecewiseSetMap mu_inner_limit_map(const PiecewiseSetMap& map,
                                   const Measure& mu,
                                   Topology top = Topology::Standard);

enum class WitnessKind {
  InnerLimitMiss,      // value point outside the inner limit
  OuterLimitEscape,    // outer-limit point outside the value
  MeasureLimitEscape,  // measure-inner-limit point outside the closed value
  NotSolid,
  DensityEscape,       // interior of two-sided limit outside the closed value
};

struct Witness {
  double t = 0.0;
  double x = 0.0;
  WitnessKind kind = WitnessKind::InnerLimitMiss;
  double violation = 0.0;  // distance to the set that should contain x
};

struct RegularityReport {
  bool verdict = true;
  std::vector<Witness> violations;
};

RegularityReport is_inner_semicontinuous(const PiecewiseSetMap& map,
                                         Topology top = Topology::Standard);
RegularityReport is_outer_semicontinuous(const PiecewiseSetMap& map,
                                         Topology top = Topology::Standard);
RegularityReport is_outer_mu_regular(const PiecewiseSetMap& map,
                                     const Measure& mu,
                                     Topology top = Topology::Standard);
// Requires convex-valued input: inner semicontinuity plus solid values plus
// the interior of the two-sided limit staying inside the closed value.
RegularityReport is_fully_lsc(const PiecewiseSetMap& map);

// Smallest closed-valued map containing every input mu-almost everywhere,
// with canonical values at grid points: the closed union of the inputs'
// values at atoms of mu, the union of the adjacent one-sided limits
// elsewhere.
PiecewiseSetMap mu_essential_supremum(const std::vector<PiecewiseSetMap>& maps,
                                      const Measure& mu);

}  // namespace varsel

#pragma once

#include <cstddef>
#include <vector>

#include "varsel/integrand.hpp"
#include "varsel/interval.hpp"
#include "varsel/measure.hpp"
#include "varsel/plq.hpp"
#include "varsel/pwfun.hpp"
#include "varsel/setmap.hpp"

namespace varsel {

// Brute-force cross-checks that apply the definitional formulas to sampled
// data. They share nothing with the exact engine beyond the basic set and
// measure types, so agreement between the two is evidence, not tautology.

// A set-valued map sampled on a uniform grid over [0, 1]. Values may come
// from a PiecewiseSetMap or from any generator (e.g. a truncation of a map
// with infinitely many pieces, which the exact engine does not accept).
struct SampledMap {
  std::vector<double> tgrid;
  std::vector<IntervalUnion> values;
  double step = 0.0;
};

SampledMap sample_map(const PiecewiseSetMap& map, double step);

enum class LimitKind { Inner, Outer };

struct OracleParams {
  double step = 1.0 / 4096.0;
  // Ball radii shrink as 2^-k up to this depth; radii below 1.5 * step
  // saturate, so deeper schedules only ever shrink the accepted set.
  int depth = 12;
};

// Acceptance tests at a single point. Inner: every sample in the window
// around t meets the ball. Outer: some sample does. The window spans
// 1.5 * step, so on-grid t sees itself and both neighbours (left topology:
// itself and the left neighbour; at t = 0 only the sample at 0 remains,
// which makes all three limits collapse to the value there).
bool oracle_accepts(const SampledMap& s, double t, double x, LimitKind kind,
                    Topology top, const OracleParams& params);

// Accepts x when the samples missing the ball around x carry total measure
// at most kNullMeasureTol within the window. A gap between two consecutive
// samples counts only when both ends miss; a missing sample on its own
// contributes just the atom mass sitting exactly on it.
bool oracle_mli_accepts(const SampledMap& s, double t, double x,
                        const Measure& mu, Topology top,
                        const OracleParams& params);

// Full accepted sets, scanned at x-resolution step and merged into interval
// unions. Scanning is clipped to [-kClipBound, kClipBound].
IntervalUnion oracle_limits(const SampledMap& s, double t, LimitKind kind,
                            Topology top, const OracleParams& params);
IntervalUnion oracle_mli(const SampledMap& s, double t, const Measure& mu,
                         Topology top, const OracleParams& params);

// sup over a uniform x-grid of x * v - f(x), one value per entry of vgrid.
// Grid points outside dom f contribute nothing.
std::vector<double> oracle_conjugate(const PLQFunction& f, double xlo,
                                     double xhi, std::size_t nx,
                                     const std::vector<double>& vgrid);

// Midpoint Riemann sum of t -> h_t(y_t) against the density part of mu on
// n uniform cells, plus the exact atom terms.
double oracle_integral_functional(const NormalIntegrand& h,
                                  const PiecewiseFunction& y,
                                  const Measure& mu, std::size_t n);

}  // namespace varsel

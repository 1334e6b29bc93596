#pragma once

#include <vector>

#include "varsel/integrand.hpp"
#include "varsel/measure.hpp"
#include "varsel/pwfun.hpp"

namespace varsel {

// Convergence tolerance for the reported gap of a refined dual estimate.
inline constexpr double kDualityGapTol = 1e-3;

struct DualityReport {
  double J = 0.0;
  std::vector<double> estimates;  // nondecreasing lower bounds, one per level
  double gap = 0.0;               // J minus the last estimate
  bool regular = false;
  bool consistent = false;
};

struct BVDualityReport {
  double exact_sup = 0.0;  // closed-form value of the supremum
  double J = 0.0;
  std::vector<double> estimates;  // numerical lower bounds of the supremum
  double gap = 0.0;               // exact_sup minus the last estimate
  bool left_regular = false;
  bool consistent = false;
};

struct MembershipReport {
  bool inside = false;
  double radius = 0.0;
};

// Dual value combining the absolutely continuous part (conjugate integrand
// composed with the density ratio, integrated against mu) and the singular
// atoms (recession of the conjugate at the atom weight). Requires mu
// strictly positive.
double eval_Jhstar(const NormalIntegrand& h, const SignedMeasure& theta,
                   const Measure& mu);

// Lower bounds of the conjugate of the integral functional at theta:
// maximize <y, theta> - I_h(y) over continuous piecewise-affine y on dyadic
// refinements of the common grid (levels 0..levels), by cyclic coordinate
// ascent with golden-section line search. Nondecreasing across levels
// (warm-started on nested grids). Requires solid domains throughout.
std::vector<double> estimate_Ih_conjugate(const NormalIntegrand& h,
                                          const SignedMeasure& theta,
                                          const Measure& mu, int levels);

DualityReport duality_report(const NormalIntegrand& h,
                             const SignedMeasure& theta, const Measure& mu,
                             int levels);

// Essential infimum over t of the distance from y_t to the complement of
// dom h_t; inside means positive radius, i.e. a uniform tube around y stays
// feasible almost everywhere.
MembershipReport int_dom_Ih_membership(const NormalIntegrand& h,
                                       const PiecewiseFunction& y,
                                       const Measure& mu);

// Exact and numerical evaluation of the supremum of <x, theta> - I_h(x)
// over left-continuous functions of bounded variation, compared against
// the dual value J. The exact side integrates the pointwise infimum of the
// tilted integrand over the measure inner limit (left topology) of the
// domain map; the numerical side optimizes left-continuous piecewise-affine
// functions with jumps on dyadic refinements.
BVDualityReport bv_duality(const NormalIntegrand& h, const SignedMeasure& theta,
                           const Measure& mu, int levels);

}  // namespace varsel

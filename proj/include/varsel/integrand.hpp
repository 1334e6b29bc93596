#pragma once

#include <vector>

#include "varsel/measure.hpp"
#include "varsel/plq.hpp"
#include "varsel/pwfun.hpp"
#include "varsel/setmap.hpp"

namespace varsel {

// Family of convex integrands on [0,1], piecewise constant in t: one
// function per open grid piece and one per grid point. Every member is
// proper by construction, so the family is measurable with closed convex
// epigraphs and needs no further hypotheses downstream.
class NormalIntegrand {
 public:
  NormalIntegrand(std::vector<double> tgrid, std::vector<PLQFunction> piece_fns,
                  std::vector<PLQFunction> break_fns);

  static NormalIntegrand constant(const PLQFunction& f);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<PLQFunction>& piece_functions() const {
    return piece_fns_;
  }
  const std::vector<PLQFunction>& break_functions() const {
    return break_fns_;
  }

  // Integrand at time t: grid points (exact match) get their own function,
  // interior points the function of the containing piece.
  const PLQFunction& at(double t) const;

  NormalIntegrand refined(const std::vector<double>& supergrid) const;

 private:
  std::vector<double> grid_;
  std::vector<PLQFunction> piece_fns_;
  std::vector<PLQFunction> break_fns_;
};

// t -> dom h_t as a set-valued map (constant on pieces, explicit at grid
// points).
PiecewiseSetMap domain_map(const NormalIntegrand& h);

// Exact value of the integral functional y -> integral of h_t(y_t) d mu.
// Pieces integrate in closed form (quadratic composed with affine y, times
// the constant density); atoms contribute pointwise. Returns +inf as soon
// as y leaves the domain on a set of positive measure or at an atom;
// zero-density pieces never contribute.
double eval_Ih(const NormalIntegrand& h, const PiecewiseFunction& y,
               const Measure& mu);

}  // namespace varsel

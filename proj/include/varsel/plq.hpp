#pragma once

#include <vector>

#include "varsel/interval.hpp"

namespace varsel {

// One convex quadratic piece q/2 x^2 + s x + c, q >= 0.
struct PLQPiece {
  double q = 0.0, s = 0.0, c = 0.0;
  double value(double x) const { return 0.5 * q * x * x + s * x + c; }
  double slope(double x) const { return q * x + s; }
};

// Closed proper convex piecewise linear-quadratic function of one variable.
// Finite on a closed interval [lo, hi] (either end may be infinite), +inf
// outside. Interior breakpoints split the domain into pieces; continuity
// and nondecreasing one-sided slopes are enforced on construction, so the
// represented function is always closed proper convex. A singleton domain
// carries a single constant piece.
class PLQFunction {
 public:
  PLQFunction(double lo, double hi, std::vector<double> breaks,
              std::vector<PLQPiece> pieces);

  static PLQFunction point(double x, double value);
  static PLQFunction affine(double s, double c);
  static PLQFunction quadratic(double q, double s, double c);
  static PLQFunction indicator(double lo, double hi);

  bool is_point() const { return lo_ == hi_; }
  double point_value() const;
  Interval domain() const { return Interval{lo_, hi_}; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<PLQPiece>& pieces() const { return pieces_; }

  double value(double x) const;
  // All finite knots: finite domain endpoints plus interior breakpoints.
  std::vector<double> knots() const;
  // Piece index whose closed span contains x (x inside the domain).
  std::size_t piece_index(double x) const;

 private:
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> breaks_;
  std::vector<PLQPiece> pieces_;
  void canonicalize();
  void validate() const;
};

// Legendre transform, exact on the PLQ class: quadratic pieces invert to
// quadratic pieces over their slope range, slope jumps at knots and finite
// domain endpoints become affine pieces.
PLQFunction conjugate(const PLQFunction& f);

// Asymptotic growth function: linear rays with the limiting slopes of f,
// infinite in any direction where f grows superlinearly or its domain is
// bounded; always 0 at 0.
PLQFunction recession(const PLQFunction& f);

// x -> f(x) - slope * x, same domain.
PLQFunction tilt(const PLQFunction& f, double slope);

// Exact infimum of f over window (intersected with the domain); +inf when
// that intersection is empty, -inf when f is unbounded below on it.
double plq_min_over(const PLQFunction& f, const Interval& window);

// Exact integral of f over [a, b], a <= b finite; +inf when [a, b] leaves
// the domain by more than the tolerance.
double plq_integral(const PLQFunction& f, double a, double b);

// Exact integral of t -> f(y(t)) over [t0, t1] with y affine from y0 to y1.
double plq_integral_along(const PLQFunction& f, double t0, double t1,
                          double y0, double y1);

// Function-level equality within tol: domains, knots, and per-piece
// coefficients compared on the merged knot structure.
bool plq_equal(const PLQFunction& f, const PLQFunction& g, double tol);

}  // namespace varsel

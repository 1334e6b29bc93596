#include "varsel/plq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "varsel/tolerance.hpp"

namespace varsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close(double a, double b, double tol) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace

PLQFunction::PLQFunction(double lo, double hi, std::vector<double> breaks,
                         std::vector<PLQPiece> pieces)
    : lo_(lo), hi_(hi), breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  validate();
  canonicalize();
}

PLQFunction PLQFunction::point(double x, double value) {
  return PLQFunction(x, x, {}, {PLQPiece{0.0, 0.0, value}});
}

PLQFunction PLQFunction::affine(double s, double c) {
  return PLQFunction(-kInf, kInf, {}, {PLQPiece{0.0, s, c}});
}

PLQFunction PLQFunction::quadratic(double q, double s, double c) {
  return PLQFunction(-kInf, kInf, {}, {PLQPiece{q, s, c}});
}

PLQFunction PLQFunction::indicator(double lo, double hi) {
  return PLQFunction(lo, hi, {}, {PLQPiece{0.0, 0.0, 0.0}});
}

void PLQFunction::validate() const {
  const double tol = set_tol();
  if (std::isnan(lo_) || std::isnan(hi_))
    throw std::invalid_argument("domain endpoint is NaN");
  if (lo_ > hi_) throw std::invalid_argument("empty domain");
  if (lo_ == hi_ && !std::isfinite(lo_))
    throw std::invalid_argument("singleton domain at infinity");
  if (pieces_.size() != breaks_.size() + 1)
    throw std::invalid_argument("piece count must be break count plus one");
  if (lo_ == hi_ && !breaks_.empty())
    throw std::invalid_argument("singleton domain admits no breakpoints");
  for (const PLQPiece& p : pieces_) {
    if (!std::isfinite(p.s) || !std::isfinite(p.c) || !std::isfinite(p.q))
      throw std::invalid_argument("piece coefficient not finite");
    if (p.q < -tol) throw std::invalid_argument("concave piece");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (!(breaks_[i] > lo_ && breaks_[i] < hi_))
      throw std::invalid_argument("breakpoint outside open domain");
    if (i > 0 && !(breaks_[i] > breaks_[i - 1]))
      throw std::invalid_argument("breakpoints must increase");
  }
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    double b = breaks_[i];
    double vl = pieces_[i].value(b), vr = pieces_[i + 1].value(b);
    if (!close(vl, vr, tol))
      throw std::invalid_argument("discontinuity at a breakpoint");
    double sl = pieces_[i].slope(b), sr = pieces_[i + 1].slope(b);
    if (sr < sl - tol * (1.0 + std::abs(sl)))
      throw std::invalid_argument("slope decreases across a breakpoint");
  }
}

void PLQFunction::canonicalize() {
  for (PLQPiece& p : pieces_)
    if (p.q < 0.0) p.q = 0.0;
  if (is_point()) {
    double v = pieces_[0].value(lo_);
    pieces_ = {PLQPiece{0.0, 0.0, v}};
    return;
  }
  // Pieces narrower than roundoff can resolve are dropped; conjugation
  // produces such slivers when a computed kink lands a few ulps off a knot.
  auto sliver = [](double a, double b) {
    return b - a <= 1e-12 * (1.0 + std::max(std::abs(a), std::abs(b)));
  };
  while (!breaks_.empty() && std::isfinite(lo_) && sliver(lo_, breaks_.front())) {
    breaks_.erase(breaks_.begin());
    pieces_.erase(pieces_.begin());
  }
  while (!breaks_.empty() && std::isfinite(hi_) && sliver(breaks_.back(), hi_)) {
    breaks_.pop_back();
    pieces_.pop_back();
  }
  for (std::size_t i = 1; i < breaks_.size();) {
    if (sliver(breaks_[i - 1], breaks_[i])) {
      breaks_.erase(breaks_.begin() + static_cast<std::ptrdiff_t>(i));
      pieces_.erase(pieces_.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  std::vector<double> nb;
  std::vector<PLQPiece> np{pieces_[0]};
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    const PLQPiece& nxt = pieces_[i + 1];
    const PLQPiece& cur = np.back();
    if (cur.q == nxt.q && cur.s == nxt.s && cur.c == nxt.c) continue;
    nb.push_back(breaks_[i]);
    np.push_back(nxt);
  }
  breaks_ = std::move(nb);
  pieces_ = std::move(np);
}

double PLQFunction::point_value() const {
  if (!is_point()) throw std::logic_error("not a singleton-domain function");
  return pieces_[0].value(lo_);
}

std::size_t PLQFunction::piece_index(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return static_cast<std::size_t>(it - breaks_.begin());
}

double PLQFunction::value(double x) const {
  if (std::isnan(x)) return kInf;
  if (is_point()) return x == lo_ ? pieces_[0].c : kInf;
  if (x < lo_ || x > hi_) return kInf;
  return pieces_[piece_index(x)].value(x);
}

std::vector<double> PLQFunction::knots() const {
  std::vector<double> k;
  if (std::isfinite(lo_)) k.push_back(lo_);
  for (double b : breaks_)
    if (k.empty() || b > k.back()) k.push_back(b);
  if (std::isfinite(hi_) && (k.empty() || hi_ > k.back())) k.push_back(hi_);
  return k;
}

PLQFunction conjugate(const PLQFunction& f) {
  if (f.is_point())
    return PLQFunction::affine(f.domain().lo, -f.point_value());

  struct Segment {
    double ylo, yhi;
    PLQPiece piece;
  };
  std::vector<Segment> segs;
  const auto& pieces = f.pieces();
  const auto& breaks = f.breaks();
  const double lo = f.domain().lo, hi = f.domain().hi;

  auto knot_at = [&](std::size_t k) {
    if (k == 0) return lo;
    if (k == breaks.size() + 1) return hi;
    return breaks[k - 1];
  };

  if (std::isfinite(lo))
    segs.push_back({-kInf, pieces.front().slope(lo),
                    PLQPiece{0.0, lo, -f.value(lo)}});
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    double xk = knot_at(k), xk1 = knot_at(k + 1);
    if (pieces[k].q > 0.0) {
      double ylo = std::isfinite(xk) ? pieces[k].slope(xk) : -kInf;
      double yhi = std::isfinite(xk1) ? pieces[k].slope(xk1) : kInf;
      double q = pieces[k].q, s = pieces[k].s, c = pieces[k].c;
      segs.push_back(
          {ylo, yhi, PLQPiece{1.0 / q, -s / q, s * s / (2.0 * q) - c}});
    }
    if (k + 1 < pieces.size()) {
      double b = breaks[k];
      double jl = pieces[k].slope(b), jr = pieces[k + 1].slope(b);
      if (jr > jl)
        segs.push_back({jl, jr, PLQPiece{0.0, b, -f.value(b)}});
    }
  }
  if (std::isfinite(hi))
    segs.push_back(
        {pieces.back().slope(hi), kInf, PLQPiece{0.0, hi, -f.value(hi)}});

  if (segs.empty()) {
    // Affine on the whole line: the supremum is finite at one slope only.
    return PLQFunction::point(pieces[0].s, -pieces[0].c);
  }

  std::vector<double> cbreaks;
  std::vector<PLQPiece> cpieces;
  double ylo = segs.front().ylo;
  double cursor = ylo;
  for (Segment& s : segs) {
    s.ylo = std::max(s.ylo, cursor);
    if (s.yhi <= s.ylo) continue;
    if (!cpieces.empty()) cbreaks.push_back(s.ylo);
    cpieces.push_back(s.piece);
    cursor = s.yhi;
  }
  return PLQFunction(ylo, cursor, std::move(cbreaks), std::move(cpieces));
}

PLQFunction recession(const PLQFunction& f) {
  if (f.is_point()) return PLQFunction::point(0.0, 0.0);
  const double lo = f.domain().lo, hi = f.domain().hi;
  bool left_open = (lo == -kInf) && f.pieces().front().q == 0.0;
  bool right_open = (hi == kInf) && f.pieces().back().q == 0.0;
  double sl = f.pieces().front().s, sr = f.pieces().back().s;
  if (left_open && right_open)
    return PLQFunction(-kInf, kInf, {0.0},
                       {PLQPiece{0.0, sl, 0.0}, PLQPiece{0.0, sr, 0.0}});
  if (left_open) return PLQFunction(-kInf, 0.0, {}, {PLQPiece{0.0, sl, 0.0}});
  if (right_open) return PLQFunction(0.0, kInf, {}, {PLQPiece{0.0, sr, 0.0}});
  return PLQFunction::point(0.0, 0.0);
}

PLQFunction tilt(const PLQFunction& f, double slope) {
  if (f.is_point())
    return PLQFunction::point(f.domain().lo,
                              f.point_value() - slope * f.domain().lo);
  std::vector<PLQPiece> pieces = f.pieces();
  for (PLQPiece& p : pieces) p.s -= slope;
  return PLQFunction(f.domain().lo, f.domain().hi, f.breaks(),
                     std::move(pieces));
}

double plq_min_over(const PLQFunction& f, const Interval& window) {
  const double tol = set_tol();
  if (f.is_point())
    return window.contains(f.domain().lo, tol) ? f.point_value() : kInf;
  double a = std::max(f.domain().lo, window.lo);
  double b = std::min(f.domain().hi, window.hi);
  if (a > b) {
    if (a - b > tol) return kInf;
    double x = std::min(std::max(0.5 * (a + b), f.domain().lo), f.domain().hi);
    return f.value(x);
  }
  const auto& pieces = f.pieces();
  const auto& breaks = f.breaks();
  double best = kInf;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    double plo = k == 0 ? f.domain().lo : breaks[k - 1];
    double phi = k == pieces.size() - 1 ? f.domain().hi : breaks[k];
    double u = std::max(plo, a), v = std::min(phi, b);
    if (u > v) continue;
    const PLQPiece& p = pieces[k];
    if (p.q > 0.0) {
      double xm = std::min(std::max(-p.s / p.q, u), v);
      best = std::min(best, p.value(xm));
    } else if (p.s > 0.0) {
      if (u == -kInf) return -kInf;
      best = std::min(best, p.value(u));
    } else if (p.s < 0.0) {
      if (v == kInf) return -kInf;
      best = std::min(best, p.value(v));
    } else {
      best = std::min(best, p.c);
    }
  }
  return best;
}

double plq_integral(const PLQFunction& f, double a, double b) {
  const double tol = set_tol();
  if (!std::isfinite(a) || !std::isfinite(b) || a > b)
    throw std::invalid_argument("integration bounds must be finite, a <= b");
  if (a == b) return 0.0;
  if (f.is_point()) return kInf;
  if (a < f.domain().lo - tol || b > f.domain().hi + tol) return kInf;
  a = std::max(a, f.domain().lo);
  b = std::min(b, f.domain().hi);
  const auto& pieces = f.pieces();
  const auto& breaks = f.breaks();
  auto anti = [](const PLQPiece& p, double x) {
    return p.q * x * x * x / 6.0 + p.s * x * x / 2.0 + p.c * x;
  };
  double total = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    double plo = k == 0 ? f.domain().lo : breaks[k - 1];
    double phi = k == pieces.size() - 1 ? f.domain().hi : breaks[k];
    double u = std::max(plo, a), v = std::min(phi, b);
    if (u >= v) continue;
    total += anti(pieces[k], v) - anti(pieces[k], u);
  }
  return total;
}

double plq_integral_along(const PLQFunction& f, double t0, double t1,
                          double y0, double y1) {
  const double tol = set_tol();
  if (t0 > t1) throw std::invalid_argument("time bounds out of order");
  if (t0 == t1) return 0.0;
  const double dlo = f.domain().lo, dhi = f.domain().hi;
  const double lo = std::min(y0, y1), hi = std::max(y0, y1);
  if (lo < dlo - tol || hi > dhi + tol) return kInf;
  const double cl = std::max(lo, dlo), ch = std::min(hi, dhi);
  if (!(ch > cl)) {
    const double x = std::min(std::max(0.5 * (cl + ch), dlo), dhi);
    return (t1 - t0) * f.value(x);
  }
  // Time-average of f along the affine path, piece by piece. Each piece is
  // quadratic, so Simpson's rule gives the exact mean; averaging values
  // instead of dividing antiderivative differences stays stable as y1
  // approaches y0.
  const auto& pieces = f.pieces();
  const auto& breaks = f.breaks();
  double total = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const double plo = k == 0 ? dlo : breaks[k - 1];
    const double phi = k + 1 == pieces.size() ? dhi : breaks[k];
    const double u = std::max(plo, cl), v = std::min(phi, ch);
    if (u >= v) continue;
    const PLQPiece& p = pieces[k];
    const double avg =
        (p.value(u) + 4.0 * p.value(0.5 * (u + v)) + p.value(v)) / 6.0;
    total += (t1 - t0) * ((v - u) / (ch - cl)) * avg;
  }
  return total;
}

bool plq_equal(const PLQFunction& f, const PLQFunction& g, double tol) {
  if (f.is_point() != g.is_point()) return false;
  if (f.is_point())
    return close(f.domain().lo, g.domain().lo, tol) &&
           close(f.point_value(), g.point_value(), tol);
  auto same_end = [&](double a, double b) {
    return a == b || (std::isfinite(a) && std::isfinite(b) &&
                      std::abs(a - b) <= tol * (1.0 + std::abs(a)));
  };
  if (!same_end(f.domain().lo, g.domain().lo)) return false;
  if (!same_end(f.domain().hi, g.domain().hi)) return false;

  std::vector<double> bounds;
  for (double x : f.breaks()) bounds.push_back(x);
  for (double x : g.breaks()) bounds.push_back(x);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [&](double x, double y) {
                             return std::abs(x - y) <= tol;
                           }),
               bounds.end());
  double lo = std::max(f.domain().lo, g.domain().lo);
  double hi = std::min(f.domain().hi, g.domain().hi);

  std::vector<double> reps;
  double prev = lo;
  for (double b : bounds) {
    reps.push_back(std::isfinite(prev) ? 0.5 * (prev + b) : b - 1.0);
    prev = b;
  }
  if (std::isfinite(prev) && std::isfinite(hi))
    reps.push_back(0.5 * (prev + hi));
  else if (std::isfinite(prev))
    reps.push_back(prev + 1.0);
  else
    reps.push_back(0.0);

  for (double r : reps) {
    r = std::min(std::max(r, lo), hi);
    const PLQPiece& pf = f.pieces()[f.piece_index(r)];
    const PLQPiece& pg = g.pieces()[g.piece_index(r)];
    if (!close(pf.q, pg.q, tol) || !close(pf.s, pg.s, tol) ||
        !close(pf.c, pg.c, tol))
      return false;
  }
  return true;
}

}  // namespace varsel

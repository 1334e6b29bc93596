#include "varsel/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "varsel/tolerance.hpp"

namespace varsel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool Interval::contains(double x, double tol) const {
  return x >= lo - tol && x <= hi + tol;
}

double Interval::length() const {
  if (lo == -kInf || hi == kInf) return kInf;
  return hi - lo;
}

IntervalUnion::IntervalUnion(std::vector<Interval> parts) {
  const double tol = set_tol();
  for (const Interval& iv : parts) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi))
      throw std::invalid_argument("interval endpoint is NaN");
    if (iv.lo > iv.hi + tol)
      throw std::invalid_argument("interval with lo > hi");
  }
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  for (Interval iv : parts) {
    if (iv.lo > iv.hi) iv.lo = iv.hi = 0.5 * (iv.lo + iv.hi);
    if (!parts_.empty() && iv.lo <= parts_.back().hi + tol) {
      parts_.back().hi = std::max(parts_.back().hi, iv.hi);
    } else {
      parts_.push_back(iv);
    }
  }
}

IntervalUnion IntervalUnion::empty() { return IntervalUnion(); }

IntervalUnion IntervalUnion::whole() {
  return IntervalUnion({Interval{-kInf, kInf}});
}

IntervalUnion IntervalUnion::single(double lo, double hi) {
  return IntervalUnion({Interval{lo, hi}});
}

IntervalUnion IntervalUnion::point(double x) {
  return IntervalUnion({Interval{x, x}});
}

bool IntervalUnion::contains(double x, double tol) const {
  for (const Interval& iv : parts_)
    if (iv.contains(x, tol)) return true;
  return false;
}

double IntervalUnion::distance_to(double x) const {
  if (parts_.empty()) return kInf;
  double best = kInf;
  for (const Interval& iv : parts_) {
    double d = 0.0;
    if (x < iv.lo)
      d = iv.lo - x;
    else if (x > iv.hi)
      d = x - iv.hi;
    best = std::min(best, d);
    if (best == 0.0) break;
  }
  return best;
}

double IntervalUnion::inf() const {
  return parts_.empty() ? kInf : parts_.front().lo;
}

double IntervalUnion::sup() const {
  return parts_.empty() ? -kInf : parts_.back().hi;
}

std::string IntervalUnion::describe() const {
  if (parts_.empty()) return "{}";
  std::ostringstream os;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << " u ";
    if (parts_[i].is_point())
      os << "{" << parts_[i].lo << "}";
    else
      os << "[" << parts_[i].lo << ", " << parts_[i].hi << "]";
  }
  return os.str();
}

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> parts = a.parts();
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  return IntervalUnion(std::move(parts));
}

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  const auto& A = a.parts();
  const auto& B = b.parts();
  while (i < A.size() && j < B.size()) {
    double lo = std::max(A[i].lo, B[j].lo);
    double hi = std::min(A[i].hi, B[j].hi);
    if (lo <= hi) {
      out.push_back(Interval{lo, hi});
    } else if (lo <= hi + set_tol()) {
      double mid = 0.5 * (lo + hi);
      out.push_back(Interval{mid, mid});
    }
    if (A[i].hi < B[j].hi)
      ++i;
    else
      ++j;
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion difference(const IntervalUnion& a, const IntervalUnion& b) {
  const double tol = set_tol();
  std::vector<Interval> out;
  for (const Interval& part : a.parts()) {
    double cur = part.lo;
    bool open_left = false;  // cur sits on a boundary of b
    for (const Interval& cut : b.parts()) {
      if (cut.hi < cur) continue;
      if (cut.lo > part.hi) break;
      if (cut.lo > cur) out.push_back(Interval{cur, cut.lo});
      cur = std::max(cur, cut.hi);
      open_left = true;
      if (cur >= part.hi) break;
    }
    if (cur < part.hi)
      out.push_back(Interval{cur, part.hi});
    else if (cur == part.hi && !open_left)
      out.push_back(Interval{cur, cur});
  }
  // Drop slivers that stay within tolerance of b.
  std::vector<Interval> kept;
  for (const Interval& iv : out) {
    if (iv.length() <= tol) {
      double mid = 0.5 * (iv.lo + iv.hi);
      if (b.contains(mid, tol)) continue;
    }
    kept.push_back(iv);
  }
  return IntervalUnion(std::move(kept));
}

IntervalUnion clip(const IntervalUnion& a, double lo, double hi) {
  return intersect(a, IntervalUnion::single(lo, hi));
}

namespace {

// Candidate maximizers of dist(., b) within the clipped a.
void collect_candidates(const IntervalUnion& a, const IntervalUnion& b,
                        std::vector<double>& xs) {
  for (const Interval& iv : a.parts()) {
    xs.push_back(iv.lo);
    xs.push_back(iv.hi);
  }
  const auto& B = b.parts();
  for (std::size_t j = 0; j + 1 < B.size(); ++j) {
    double center = 0.5 * (B[j].hi + B[j + 1].lo);
    if (a.contains(center)) xs.push_back(center);
  }
}

}  // namespace

double excess(const IntervalUnion& a, const IntervalUnion& b) {
  IntervalUnion ac = clip(a, -kClipBound, kClipBound);
  IntervalUnion bc = clip(b, -kClipBound, kClipBound);
  if (ac.is_empty()) return 0.0;
  if (bc.is_empty()) return kInf;
  std::vector<double> xs;
  collect_candidates(ac, bc, xs);
  double best = 0.0;
  for (double x : xs) best = std::max(best, bc.distance_to(x));
  return best;
}

double hausdorff(const IntervalUnion& a, const IntervalUnion& b) {
  return std::max(excess(a, b), excess(b, a));
}

std::optional<ViolationPoint> max_violation(const IntervalUnion& a,
                                            const IntervalUnion& b,
                                            double tol) {
  IntervalUnion ac = clip(a, -kClipBound, kClipBound);
  IntervalUnion bc = clip(b, -kClipBound, kClipBound);
  if (ac.is_empty()) return std::nullopt;
  std::vector<double> xs;
  collect_candidates(ac, bc, xs);
  ViolationPoint best;
  bool found = false;
  for (double x : xs) {
    double d = bc.is_empty() ? kInf : bc.distance_to(x);
    if (d >= best.distance) {  // ties resolve to the largest x
      best = ViolationPoint{x, d};
      found = true;
    }
  }
  if (!found || best.distance <= tol) return std::nullopt;
  return best;
}

bool subset_of(const IntervalUnion& a, const IntervalUnion& b, double tol) {
  return excess(a, b) <= tol;
}

bool equal_sets(const IntervalUnion& a, const IntervalUnion& b, double tol) {
  if (a.is_empty() != b.is_empty()) return false;
  if (a.is_empty()) return true;
  return hausdorff(a, b) <= tol;
}

bool identical_sets(const IntervalUnion& a, const IntervalUnion& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.parts()[i].lo != b.parts()[i].lo) return false;
    if (a.parts()[i].hi != b.parts()[i].hi) return false;
  }
  return true;
}

double representative_point(const Interval& iv) {
  bool lo_inf = iv.lo == -kInf;
  bool hi_inf = iv.hi == kInf;
  if (lo_inf && hi_inf) return 0.0;
  if (lo_inf) return iv.hi - 1.0;
  if (hi_inf) return iv.lo + 1.0;
  return 0.5 * (iv.lo + iv.hi);
}

}  // namespace varsel

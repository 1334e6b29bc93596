#pragma once

#include <optional>
#include <string>
#include <vector>

namespace varsel {

// Closed interval of the real line. lo <= hi; either endpoint may be
// infinite. lo == hi denotes a singleton.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x, double tol = 0.0) const;
  double length() const;
  bool is_point() const { return lo == hi; }
};

// Finite union of disjoint closed intervals, kept sorted. Construction
// merges components whose gap is at most set_tol().
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> parts);

  static IntervalUnion empty();
  static IntervalUnion whole();
  static IntervalUnion single(double lo, double hi);
  static IntervalUnion point(double x);

  bool is_empty() const { return parts_.empty(); }
  const std::vector<Interval>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }

  bool contains(double x, double tol = 0.0) const;
  // 0 inside, +inf for the empty set.
  double distance_to(double x) const;
  bool is_convex() const { return parts_.size() <= 1; }
  bool is_single_interval() const { return parts_.size() == 1; }
  double inf() const;  // +inf for the empty set
  double sup() const;  // -inf for the empty set

  std::string describe() const;

 private:
  std::vector<Interval> parts_;
};

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
// Closure of a \ b; components shorter than set_tol() that touch b are
// dropped, so the result only keeps genuine remainders.
IntervalUnion difference(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion clip(const IntervalUnion& a, double lo, double hi);

// sup_{x in a'} dist(x, b') with a', b' the clipped sets. 0 when a' is
// empty, +inf when b' is empty and a' is not.
double excess(const IntervalUnion& a, const IntervalUnion& b);
double hausdorff(const IntervalUnion& a, const IntervalUnion& b);

struct ViolationPoint {
  double x = 0.0;
  double distance = 0.0;
};

// Point of a (clipped) furthest from b, when that distance exceeds tol.
// Ties resolve to the largest maximizer.
std::optional<ViolationPoint> max_violation(const IntervalUnion& a,
                                            const IntervalUnion& b,
                                            double tol);

bool subset_of(const IntervalUnion& a, const IntervalUnion& b, double tol);
bool equal_sets(const IntervalUnion& a, const IntervalUnion& b, double tol);
// Part-for-part identity of representations, no tolerance.
bool identical_sets(const IntervalUnion& a, const IntervalUnion& b);

// Representative interior point: midpoint for bounded components, one unit
// inside for half-lines, 0 for the whole line.
double representative_point(const Interval& iv);

}  // namespace varsel

#pragma once

#include <limits>
#include <vector>

namespace selfnorm {

struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool lower_closed = false;
  bool upper_closed = false;

  bool contains(double x) const noexcept;
  bool is_finite() const noexcept;
};

/// Support of a continuous law as a sorted union of disjoint, nonempty intervals.
class SupportSpec {
 public:
  SupportSpec();  // the whole real line
  explicit SupportSpec(std::vector<Interval> intervals);

  static SupportSpec real_line();
  static SupportSpec half_line_from(double lower);

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  bool contains(double x) const noexcept;
  double infimum() const noexcept { return intervals_.front().lower; }
  double supremum() const noexcept { return intervals_.back().upper; }

  /// True if the open interval (lo, hi) has a nonempty intersection with the support.
  bool meets_open(double lo, double hi) const noexcept;

  SupportSpec reflected() const;
  SupportSpec scaled(double factor) const;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace selfnorm

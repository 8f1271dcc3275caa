#include "selfnorm/support.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfnorm/error.hpp"

namespace selfnorm {

bool Interval::contains(double x) const noexcept {
  const bool above = lower_closed ? x >= lower : x > lower;
  const bool below = upper_closed ? x <= upper : x < upper;
  return above && below;
}

bool Interval::is_finite() const noexcept {
  return std::isfinite(lower) && std::isfinite(upper);
}

SupportSpec::SupportSpec() : intervals_{Interval{}} {}

SupportSpec::SupportSpec(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "support must contain at least one interval");
  }
  for (auto& iv : intervals_) {
    if (std::isnan(iv.lower) || std::isnan(iv.upper) || !(iv.lower < iv.upper)) {
      throw Error(ErrorKind::InvalidArgument, "support interval must satisfy lower < upper");
    }
    if (!std::isfinite(iv.lower)) iv.lower_closed = false;
    if (!std::isfinite(iv.upper)) iv.upper_closed = false;
  }
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& l, const Interval& r) { return l.lower < r.lower; });
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    const auto& prev = intervals_[i - 1];
    const auto& cur = intervals_[i];
    const bool touching = prev.upper == cur.lower && prev.upper_closed && cur.lower_closed;
    if (prev.upper > cur.lower || touching) {
      throw Error(ErrorKind::InvalidArgument, "support intervals overlap");
    }
  }
}

SupportSpec SupportSpec::real_line() { return SupportSpec{}; }

SupportSpec SupportSpec::half_line_from(double lower) {
  return SupportSpec({Interval{lower, std::numeric_limits<double>::infinity(), true, false}});
}

bool SupportSpec::contains(double x) const noexcept {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.contains(x); });
}

bool SupportSpec::meets_open(double lo, double hi) const noexcept {
  if (!(lo < hi)) return false;
  // Intervals are nondegenerate, so an overlap of positive length is the test.
  return std::any_of(intervals_.begin(), intervals_.end(), [&](const Interval& iv) {
    return std::max(lo, iv.lower) < std::min(hi, iv.upper);
  });
}

SupportSpec SupportSpec::reflected() const {
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const auto& iv : intervals_) {
    out.push_back(Interval{-iv.upper, -iv.lower, iv.upper_closed, iv.lower_closed});
  }
  return SupportSpec(std::move(out));
}

SupportSpec SupportSpec::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
  std::vector<Interval> out = intervals_;
  for (auto& iv : out) {
    iv.lower *= factor;
    iv.upper *= factor;
  }
  return SupportSpec(std::move(out));
}

}  // namespace selfnorm

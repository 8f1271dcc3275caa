#include <cmath>
#include <limits>

#include "doctest.h"
#include "selfnorm/error.hpp"
#include "selfnorm/support.hpp"

using namespace selfnorm;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("real line contains everything finite") {
  const SupportSpec s;
  CHECK(s.contains(0.0));
  CHECK(s.contains(-1e300));
  CHECK(s.infimum() == -kInf);
  CHECK(s.supremum() == kInf);
}

TEST_CASE("half line is closed at its finite end") {
  const auto s = SupportSpec::half_line_from(-1.0);
  CHECK(s.contains(-1.0));
  CHECK_FALSE(s.contains(-1.0000001));
  CHECK(s.meets_open(-3.0, -0.5));
  CHECK_FALSE(s.meets_open(-3.0, -1.0));
}

TEST_CASE("intervals are sorted and must be disjoint") {
  const SupportSpec s({Interval{3, 4, true, true}, Interval{0, 1, true, true}});
  REQUIRE(s.intervals().size() == 2);
  CHECK(s.intervals()[0].lower == 0.0);
  CHECK(s.contains(3.5));
  CHECK_FALSE(s.contains(2.0));
  CHECK_FALSE(s.meets_open(1.2, 2.9));
  CHECK(s.meets_open(0.9, 2.9));

  CHECK_THROWS_AS(SupportSpec({Interval{0, 2, true, true}, Interval{1, 3, true, true}}), Error);
  CHECK_THROWS_AS(SupportSpec({Interval{0, 1, true, true}, Interval{1, 3, true, true}}), Error);
  CHECK_NOTHROW(SupportSpec({Interval{0, 1, true, false}, Interval{1, 3, true, true}}));
  CHECK_THROWS_AS(SupportSpec({Interval{1, 1, true, true}}), Error);
  CHECK_THROWS_AS(SupportSpec(std::vector<Interval>{}), Error);
}

TEST_CASE("reflection and scaling map endpoints") {
  const SupportSpec s({Interval{0, 1, true, false}, Interval{3, kInf, true, false}});
  const auto r = s.reflected();
  CHECK(r.infimum() == -kInf);
  CHECK(r.supremum() == 0.0);
  CHECK(r.contains(0.0));
  CHECK_FALSE(r.contains(-1.0));
  CHECK(r.contains(-3.0));
  const auto c = s.scaled(2.0);
  CHECK(c.contains(6.0));
  CHECK_FALSE(c.contains(5.0));
}

#include <cmath>
#include <vector>

#include "doctest.h"
#include "selfnorm/approximations.hpp"
#include "selfnorm/distribution.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/gaussian.hpp"

using namespace selfnorm;

namespace {
const std::vector<std::string> kLaws{"normal", "exp", "t2", "cauchy"};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}
}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("saddle") == Method::saddlepoint);
  CHECK(parse_method("saddlepoint") == Method::saddlepoint);
  CHECK(parse_method("ld") == Method::large_deviation);
  CHECK(parse_method("mc") == Method::monte_carlo);
  CHECK(parse_method("edgeworth") == Method::edgeworth);
  CHECK(parse_method(to_string(Method::normal)) == Method::normal);
  CHECK(kind_of([] { parse_method("bogus"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("normal comparator") {
  CHECK(normal_tail(5, 0.5).probability == doctest::Approx(gaussian::sf(0.5 * std::sqrt(5.0))).epsilon(1e-15));
  CHECK(normal_tail(5, 0.5, NormalScaling::sqrt_n_minus_1).probability == doctest::Approx(gaussian::sf(1.0)).epsilon(1e-15));
  CHECK(normal_tail(5, 0.0).probability == 0.5);
}

TEST_CASE("edgeworth comparator") {
  const double z = 0.5 * std::sqrt(5.0);
  const double e = gaussian::sf(z) - gaussian::pdf(z) * 2.0 * (2 * z * z + 1) / (6 * std::sqrt(5.0));
  CHECK(edgeworth_tail(make_builtin("exp"), 5, 0.5).probability == doctest::Approx(e).epsilon(1e-14));
  CHECK(edgeworth_tail(make_builtin("exp"), 5, 0.05).probability == doctest::Approx(0.3949).epsilon(1e-3));
  for (double b : {0.1, 0.5, 0.9}) {
    CHECK(edgeworth_tail(make_builtin("normal"), 5, b).probability == normal_tail(5, b).probability);
  }
  CHECK(kind_of([] { edgeworth_tail(make_builtin("t2"), 5, 0.5); }) == ErrorKind::MomentUndefined);
  CHECK(kind_of([] { edgeworth_tail(make_builtin("cauchy"), 5, 0.5); }) == ErrorKind::MomentUndefined);
}

TEST_CASE("large deviation comparator") {
  const auto d = make_builtin("normal");
  CHECK(large_deviation_tail(d, 5, 0.5).probability == doctest::Approx(std::pow(0.75, 2.5)).epsilon(1e-9));
  CHECK(kind_of([&] { large_deviation_tail(d, 5, 0.0); }) == ErrorKind::DomainUnsupported);
  CHECK(kind_of([&] { large_deviation_tail(d, 5, -0.3); }) == ErrorKind::DomainUnsupported);
  CHECK(kind_of([&] { large_deviation_tail(d, 5, 1.0); }) == ErrorKind::DomainUnsupported);
}

TEST_CASE("saddlepoint at reference values") {
  // Table values for Cauchy at n = 5.
  CHECK(saddle_upper_tail(make_builtin("cauchy"), 5, 0.85).probability == doctest::Approx(0.0052).epsilon(0.05));
  CHECK(saddle_upper_tail(make_builtin("exp"), 5, 0.5).probability == doctest::Approx(0.0822).epsilon(1e-3));
  const auto e = saddle_upper_tail(make_builtin("normal"), 5, 0.5);
  CHECK(e.probability == doctest::Approx(0.153872).epsilon(1e-5));
  REQUIRE(e.diagnostics);
  CHECK(e.diagnostics->b == 0.5);
  CHECK(e.warnings.empty());
}

TEST_CASE("saddlepoint edge cases") {
  const auto d = make_builtin("exp");
  auto z = saddle_upper_tail(d, 5, 0.0);
  CHECK(z.probability == 0.5);
  CHECK(z.has_warning(TailWarning::small_b_fallback));
  auto one = saddle_upper_tail(d, 5, 1.0);
  CHECK(one.probability == 0.0);
  CHECK(one.has_warning(TailWarning::infeasible_zero));
  CHECK(saddle_upper_tail(d, 5, -1.0).probability == 1.0);
  CHECK(kind_of([&] { saddle_upper_tail(d, 5, 0.005); }) == ErrorKind::DomainUnsupported);
  CHECK(kind_of([&] { saddle_upper_tail(d, 5, 0.995); }) == ErrorKind::DomainUnsupported);
  CHECK(kind_of([&] { saddle_upper_tail(d, 5, 1.5); }) == ErrorKind::DomainUnsupported);
  CHECK(kind_of([&] { saddle_upper_tail(d, 0, 0.5); }) == ErrorKind::InvalidArgument);
  const DistributionModel neg("neg", [](double x) { return x <= 0 ? x : -INFINITY; },
                              SupportSpec({Interval{-INFINITY, 0.0, false, true}}), {});
  const auto inf = saddle_upper_tail(neg, 5, 0.5);
  CHECK(inf.probability == 0.0);
  CHECK(inf.has_warning(TailWarning::infeasible_zero));
}

TEST_CASE("property: reflection symmetry") {
  for (const auto& name : kLaws) {
    CAPTURE(name);
    const auto d = make_builtin(name);
    const auto r = d.reflected();
    for (double b : {0.1, 0.4, 0.8}) {
      const double up = saddle_upper_tail(d, 5, b).probability;
      CHECK(saddle_upper_tail(r, 5, -b).probability == doctest::Approx(1.0 - up).epsilon(1e-9));
      if (name != "exp") CHECK(saddle_upper_tail(d, 5, -b).probability == doctest::Approx(1.0 - up).epsilon(1e-9));
    }
  }
}

TEST_CASE("property: monotone in b, bounded, near the LD tail") {
  for (const auto& name : kLaws) {
    CAPTURE(name);
    const auto d = make_builtin(name);
    double prev = 1.0;
    bool prev_clamped = true;
    for (double b = 0.05; b < 0.96; b += 0.05) {
      CAPTURE(b);
      const auto e = saddle_upper_tail(d, 5, b);
      const double p = e.probability;
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      CHECK(p <= prev);
      if (!prev_clamped) CHECK(p < prev);
      prev = p;
      prev_clamped = e.has_warning(TailWarning::clamped);
      if (b >= 0.3) {
        const double ratio = p / large_deviation_tail(d, 5, b).probability;
        CHECK(ratio > 1e-3);
        CHECK(ratio < 1e3);
      }
    }
  }
}

TEST_CASE("property: every analytic method is nonincreasing in b") {
  for (const auto& name : kLaws) {
    CAPTURE(name);
    const auto d = make_builtin(name);
    for (const Method m : {Method::normal, Method::edgeworth, Method::large_deviation}) {
      if (m == Method::edgeworth && !d.moments().skewness) continue;
      double prev = 1.0;
      for (double b = 0.05; b < 0.96; b += 0.05) {
        const double p = upper_tail(d, 5, b, m).probability;
        CHECK(p <= prev);
        prev = p;
      }
    }
  }
}

TEST_CASE("student t bridge") {
  CHECK(b_of_t(1.0, 5) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(b_of_t(0.0, 5) == 0.0);
  for (double t : {-10.0, -1.0, 0.3, 2.0, 50.0}) {
    CHECK(t_of_b(b_of_t(t, 5), 5) == doctest::Approx(t).epsilon(1e-12));
  }
  for (double b : {-0.9, 0.1, 0.7}) CHECK(b_of_t(t_of_b(b, 7), 7) == doctest::Approx(b).epsilon(1e-12));
  CHECK(kind_of([] { t_of_b(1.0, 5); }) == ErrorKind::DomainUnsupported);
  const auto d = make_builtin("t2");
  const auto st = student_t_upper_tail(d, 5, 2.0, Method::saddlepoint);
  CHECK(st.probability == doctest::Approx(saddle_upper_tail(d, 5, b_of_t(2.0, 5)).probability).epsilon(1e-14));
  CHECK(student_t_upper_tail(d, 5, 0.0, Method::normal).probability == 0.5);
  // b = 2 / sqrt(8) sits between the 0.70 and 0.75 rows of the normal table.
  const double p = student_t_upper_tail(make_builtin("normal"), 5, 2.0, Method::saddlepoint).probability;
  CHECK(p < 0.0592 + 5e-4);
  CHECK(p > 0.0417 - 5e-4);
}

TEST_CASE("dispatcher") {
  const auto d = make_builtin("normal");
  CHECK(upper_tail(d, 5, 0.5, Method::normal).method == Method::normal);
  CHECK(upper_tail(d, 5, 0.5, Method::large_deviation).probability ==
        large_deviation_tail(d, 5, 0.5).probability);
  CHECK(kind_of([&] { upper_tail(d, 5, 0.5, Method::monte_carlo); }) == ErrorKind::InvalidArgument);
}

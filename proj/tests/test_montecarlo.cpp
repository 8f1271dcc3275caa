#include <cmath>

#include "doctest.h"
#include "selfnorm/approximations.hpp"
#include "selfnorm/distribution.hpp"
#include "selfnorm/error.hpp"
#include "selfnorm/montecarlo.hpp"

using namespace selfnorm;

namespace {
McConfig config(std::uint64_t reps, std::uint64_t seed, int workers = 0, std::uint64_t batch = 65536) {
  McConfig c;
  c.reps = reps;
  c.seed = seed;
  c.workers = workers;
  c.batch_size = batch;
  return c;
}
}  // namespace

TEST_CASE("parallel and serial kernels agree exactly") {
  const auto d = make_builtin("t2");
  const auto cfg = config(300'000, 17, 0, 10'000);
  const auto p = estimate_tail(d, 5, 0.4, cfg);
  const auto s = detail::estimate_tail_serial(d, 5, 0.4, cfg);
  CHECK(p.hits == s.hits);
  CHECK(p.degenerate == s.degenerate);
  CHECK(p.p_hat == s.p_hat);
  const auto pt = estimate_student_t_tail(d, 5, 1.2, cfg);
  const auto st = detail::estimate_student_t_tail_serial(d, 5, 1.2, cfg);
  CHECK(pt.hits == st.hits);
}

TEST_CASE("worker count does not change the answer") {
  const auto d = make_builtin("exp");
  const auto ref = estimate_tail(d, 5, 0.3, config(200'000, 5, 1, 7'000));
  for (int w : {4, 16}) {
    const auto e = estimate_tail(d, 5, 0.3, config(200'000, 5, w, 7'000));
    CHECK(e.hits == ref.hits);
  }
  CHECK(ref.reps == 200'000);
  CHECK(ref.seed == 5);
  CHECK_FALSE(ref.generator.empty());
}

TEST_CASE("reference probabilities") {
  // Normal data: the event is T_4 >= 2 / sqrt(3), probability 5/32.
  const auto n = estimate_tail(make_builtin("normal"), 5, 0.5, config(1'000'000, 1));
  CHECK(std::fabs(n.p_hat - 0.15625) < 0.0015);
  const auto c = estimate_tail(make_builtin("cauchy"), 5, 0.85, config(1'000'000, 2));
  CHECK(std::fabs(c.p_hat - 0.0052) < 0.0005);
  const auto z = estimate_tail(make_builtin("exp"), 5, 0.0, config(1'000'000, 3));
  // P(sum >= 0) for a centered exponential sum of 5: Gamma(5) tail at 5.
  CHECK(std::fabs(z.p_hat - 0.4404932850652) < 0.0021);
}

TEST_CASE("confidence interval is consistent") {
  const auto e = estimate_tail(make_builtin("normal"), 5, 0.3, config(100'000, 8));
  CHECK(e.std_err == doctest::Approx(std::sqrt(e.p_hat * (1 - e.p_hat) / e.reps)).epsilon(1e-12));
  CHECK(e.ci95_low < e.p_hat);
  CHECK(e.ci95_high > e.p_hat);
  CHECK(e.ci95_low >= 0.0);
  const auto zero = estimate_tail(make_builtin("normal"), 5, 0.999, config(1'000, 8));
  CHECK(zero.p_hat == 0.0);
  CHECK(zero.ci95_low == 0.0);
  CHECK(zero.ci95_high == 0.0);
}

TEST_CASE("property: 95% intervals cover one half at b = 0") {
  int covered = 0;
  const auto d = make_builtin("normal");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto e = estimate_tail(d, 5, 0.0, config(5'000, seed));
    covered += e.ci95_low <= 0.5 && 0.5 <= e.ci95_high;
  }
  CHECK(covered >= 176);
  CHECK(covered <= 198);
}

TEST_CASE("property: 95% intervals cover the exact value") {
  // For N(0,1), sqrt(n) b_n >= ... is exactly a Student-t event: P(T_4 >= t_of_b(0.5, 5)).
  const double t = t_of_b(0.5, 5);
  // Student t with 4 df: sf(t) = 1/2 - (t/(2 sqrt(4+t^2))) (1 + 2/(4+t^2)).
  const double u = 4.0 + t * t;
  const double exact = 0.5 - t / (2.0 * std::sqrt(u)) * (1.0 + 2.0 / u);
  int covered = 0;
  const auto d = make_builtin("normal");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto e = estimate_tail(d, 5, 0.5, config(5'000, seed));
    covered += e.ci95_low <= exact && exact <= e.ci95_high;
  }
  CHECK(covered >= 176);
  CHECK(covered <= 198);
}

TEST_CASE("student t estimates") {
  const auto d = make_builtin("exp");
  const auto direct = estimate_student_t_tail(d, 5, 1.0, config(400'000, 4));
  const auto bridged = estimate_tail(d, 5, b_of_t(1.0, 5), config(400'000, 4));
  CHECK(std::fabs(direct.p_hat - bridged.p_hat) < 4.0 * std::hypot(direct.std_err, bridged.std_err));
  const auto z = estimate_student_t_tail(make_builtin("normal"), 5, 0.0, config(400'000, 7));
  CHECK(std::fabs(z.p_hat - 0.5) < 4.0 * z.std_err);
  const auto n = estimate_student_t_tail(make_builtin("normal"), 30, 1.699, config(400'000, 6));
  CHECK(std::fabs(n.p_hat - 0.05) < 0.002);
}

TEST_CASE("samplers and configs") {
  const DistributionModel nq("noquantile", [](double x) { return -0.5 * x * x - 0.9189385332046727; }, SupportSpec(), {});
  try {
    estimate_tail(nq, 5, 0.5, config(100, 1));
    FAIL("expected SamplerUnavailable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SamplerUnavailable);
  }
  CHECK_THROWS_AS(estimate_tail(make_builtin("normal"), 0, 0.5, config(100, 1)), Error);
  CHECK_THROWS_AS(estimate_tail(make_builtin("normal"), 5, 0.5, config(0, 1)), Error);
  CHECK_THROWS_AS(estimate_tail(make_builtin("normal"), 5, 0.5, config(100, 1, -1)), Error);
  CHECK_THROWS_AS(estimate_tail(make_builtin("normal"), 5, 0.5, config(100, 1, 0, 0)), Error);
}

TEST_CASE("degenerate replicates count as misses") {
  DistributionModel::Options o;
  o.quantile = [](double) { return 0.0; };
  const DistributionModel zero("zero", [](double x) { return std::fabs(x) <= 1 ? std::log(0.5) : -INFINITY; },
                               SupportSpec({Interval{-1, 1, true, true}}), o);
  const auto e = estimate_tail(zero, 5, -0.5, config(1000, 1));
  CHECK(e.degenerate == 1000);
  CHECK(e.hits == 0);
  CHECK(e.p_hat == 0.0);
  const auto t = estimate_student_t_tail(zero, 5, -1.0, config(1000, 1));
  CHECK(t.degenerate == 1000);
}

#include "selfnorm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>

#include "selfnorm/error.hpp"
#include "selfnorm/random.hpp"
#include "selfnorm/tilted_cgf.hpp"

namespace selfnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Tracks pass/fail and the worst ratio observed/allowed for one property.
class Check {
 public:
  explicit Check(std::string name) { result_.name = std::move(name); }

  void fail(std::string detail) {
    if (!failed_) result_.detail = std::move(detail);
    failed_ = true;
  }

  void bound(double observed, double allowed, const std::string& where) {
    const double ratio = observed / allowed;
    if (!(ratio <= 1.0)) {
      if (!failed_) result_.detail = where + fmt(": %.3g exceeds %.3g", observed, allowed);
      failed_ = true;
    } else if (!failed_ && ratio >= worst_) {
      worst_ = ratio;
      result_.detail = fmt("worst %.3g of allowed %.3g", observed, allowed);
    }
  }

  void require(bool ok, const std::string& where) {
    if (!ok) fail(where);
  }

  void skip(std::string why) {
    skipped_ = true;
    result_.detail = std::move(why);
  }

  PropertyResult done() {
    result_.passed = !failed_;
    if (result_.passed && result_.detail.empty()) result_.detail = skipped_ ? "skipped" : "ok";
    return result_;
  }

 private:
  PropertyResult result_;
  bool failed_ = false;
  bool skipped_ = false;
  double worst_ = -1.0;
};

std::string at_b(double b) { return fmt("b = %.4g", b); }

double five_point(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

bool VerifyReport::all_passed() const noexcept {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.passed; });
}

VerifyReport run_verify(const DistributionModel& dist, const std::vector<double>& b_grid, std::uint64_t seed,
                        const SolverConfig& cfg) {
  std::vector<double> grid = b_grid;
  std::sort(grid.begin(), grid.end());
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "verify needs a nonempty b-grid");
  for (double b : grid) {
    if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::InvalidArgument, "verify needs b in (0,1)");
  }

  Xoshiro256 rng(seed, 0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform_open(); };
  const double scale = dist.scale();
  const auto& qcfg = cfg.quadrature;

  std::vector<std::optional<SaddleSolution>> sols;
  Check solved("solver converges on the grid");
  for (double b : grid) {
    try {
      sols.push_back(solve(dist, b, cfg));
      if (sols.back()->infeasible) solved.fail(at_b(b) + ": no feasible a");
    } catch (const Error& e) {
      sols.push_back(std::nullopt);
      solved.fail(at_b(b) + ": " + e.what());
    }
  }

  VerifyReport report;
  report.results.push_back(solved.done());

  auto for_each_solution = [&](auto&& fn) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (sols[i] && !sols[i]->infeasible) fn(grid[i], *sols[i]);
    }
  };

  {
    Check c("g(0, a; b) = 0");
    for (double b : grid) {
      for (int k = 0; k < 5; ++k) {
        const double a = scale * std::pow(10.0, uniform(-1.0, 1.0));
        const double g = g_value(dist, 0.0, a, b, qcfg);
        c.require(g == 0.0, at_b(b) + fmt(", a = %.4g: g = %.3g", a, g));
      }
    }
    report.results.push_back(c.done());
  }

  {
    Check c("g strictly decreasing in t beyond its maximizer");
    for_each_solution([&](double b, const SaddleSolution& s) {
      for (double f : {0.5, 1.0, 2.0}) {
        const double a = f * s.a0;
        const InnerResult inner = inner_max_t(dist, a, b, cfg);
        if (inner.infinite) continue;
        std::vector<double> ts;
        for (int k = 0; k < 20; ++k) ts.push_back(inner.t_tilde * (1.0 - k / 20.0));
        ts.push_back(inner.t_tilde * 1e-3);
        ts.push_back(0.0);
        ts.push_back(0.1 / (scale * scale));
        double prev = kInf;
        for (double t : ts) {
          const double g = g_value(dist, t, a, b, qcfg);
          c.require(g < prev, at_b(b) + fmt(", a = %.4g: not decreasing at t = %.4g", a, t));
          prev = g;
        }
      }
    });
    report.results.push_back(c.done());
  }

  {
    Check c("signs a0 > 0, t_hat < 0, s_hat > 0");
    for_each_solution([&](double b, const SaddleSolution& s) {
      c.require(s.a0 > 0.0 && s.t_hat < 0.0 && s.s_hat > 0.0,
                at_b(b) + fmt(": a0 = %.4g, t = %.4g, s = %.4g", s.a0, s.t_hat, s.s_hat));
    });
    report.results.push_back(c.done());
  }

  {
    Check c("Lambda_aa > 0 and det Delta > 0");
    for_each_solution([&](double b, const SaddleSolution& s) {
      c.require(s.Lambda_aa > 0.0 && s.delta_det > 0.0,
                at_b(b) + fmt(": Lambda_aa = %.4g, det = %.4g", s.Lambda_aa, s.delta_det));
    });
    report.results.push_back(c.done());
  }

  {
    Check c("saddle residuals <= 1e-9");
    for_each_solution([&](double b, const SaddleSolution& s) {
      c.bound(std::max(s.residual_t, s.residual_a), 1e-9, at_b(b));
    });
    report.results.push_back(c.done());
  }

  {
    Check c("concavity g_tt < 0 at the maximizer");
    for_each_solution([&](double b, const SaddleSolution& s) {
      c.require(s.g_tt < 0.0, at_b(b) + fmt(": g_tt = %.4g", s.g_tt));
    });
    report.results.push_back(c.done());
  }

  {
    Check c("w strictly increasing in b");
    double prev_w = -kInf, prev_b = 0.0;
    for_each_solution([&](double b, const SaddleSolution& s) {
      c.require(s.w > prev_w, fmt("w(%.4g) = %.6g does not exceed w(%.4g)", b, s.w, prev_b));
      prev_w = s.w;
      prev_b = b;
    });
    report.results.push_back(c.done());
  }

  {
    Check c("outer restarts agree on a0 within 1e-8");
    const OuterSearch starts[] = {{1e-2, 1e2, 3}, {1e-4, 1e4, 5}, {0.03, 30.0, 6}, {1e-3, 1e2, 7}, {0.1, 1e3, 2}};
    for_each_solution([&](double b, const SaddleSolution& s) {
      for (const auto& st : starts) {
        SolverConfig alt = cfg;
        alt.search = st;
        try {
          const SaddleSolution r = outer_min_a(dist, b, alt);
          c.bound(std::fabs(r.a0 - s.a0) / s.a0, 1e-8, at_b(b));
        } catch (const Error& e) {
          c.fail(at_b(b) + ": restart failed: " + e.what());
        }
      }
    });
    report.results.push_back(c.done());
  }

  {
    Check c("closed-form CGF agreement within 1e-10");
    const auto& cf = dist.closed_form_cgf();
    if (!cf) {
      c.skip("no closed form");
    } else {
      const double t_hi = cf->t_upper - 0.1 * std::fabs(cf->t_upper);
      const double t_lo = -5.0 / (scale * scale);
      for (int k = 0; k < 200; ++k) {
        const double s = uniform(-3.0, 3.0) / scale;
        const double t = uniform(t_lo, t_hi);
        const CgfValue q = cgf(dist, TiltPoint{s, t}, qcfg);
        const CgfValue e = cf->eval(s, t);
        const double pairs[][2] = {{q.K, e.K},       {q.K_s, e.K_s},   {q.K_t, e.K_t},
                                   {q.K_ss, e.K_ss}, {q.K_st, e.K_st}, {q.K_tt, e.K_tt}};
        for (const auto& p : pairs) {
          c.bound(std::fabs(p[0] - p[1]) / std::max(1.0, std::fabs(p[1])), 1e-10,
                  fmt("(s, t) = (%.4g, %.4g)", s, t));
        }
      }
    }
    report.results.push_back(c.done());
  }

  {
    Check c("g_dt, g_dtt match finite differences within 1e-6");
    for (int k = 0; k < 100; ++k) {
      const double b = grid[k % grid.size()];
      const double a = scale * std::pow(10.0, uniform(-0.5, 0.5));
      const double t = -std::pow(10.0, uniform(-1.5, 0.5)) / (scale * scale);
      const double h = 1e-3 * std::fabs(t);
      const GDerivatives d = g_derivatives(dist, t, a, b, qcfg);
      const double fd1 = five_point([&](double u) { return g_value(dist, u, a, b, qcfg); }, t, h);
      const double fd2 = five_point([&](double u) { return g_dt(dist, u, a, b, qcfg); }, t, h);
      const std::string where = fmt("(t, a, b) = (%.4g, %.4g, %.4g)", t, a, b);
      c.bound(std::fabs(d.g_t - fd1) / std::max(1.0, std::fabs(d.g_t)), 1e-6, where);
      c.bound(std::fabs(d.g_tt - fd2) / std::max(1.0, std::fabs(d.g_tt)), 1e-6, where);
    }
    report.results.push_back(c.done());
  }

  {
    Check c("envelope Lambda_b = dLambda/db within 1e-4");
    const double h = 1e-4;
    for_each_solution([&](double b, const SaddleSolution& s) {
      if (!(b - h > 0.0 && b + h < 1.0)) return;
      const double up = outer_min_a(dist, b + h, cfg).Lambda;
      const double dn = outer_min_a(dist, b - h, cfg).Lambda;
      const double fd = (up - dn) / (2.0 * h);
      c.bound(std::fabs(fd - s.Lambda_b) / std::max(1.0, std::fabs(s.Lambda_b)), 1e-4, at_b(b));
    });
    report.results.push_back(c.done());
  }

  {
    Check c("rate function dominated by Lambda at a0");
    for_each_solution([&](double b, const SaddleSolution& s) {
      for (int k = 0; k < 50; ++k) {
        const double t = s.t_hat * std::pow(10.0, uniform(-1.0, 1.0));
        const double sv = s.s_hat * std::pow(10.0, uniform(-1.0, 1.0)) * (k % 5 == 0 ? -1.0 : 1.0);
        const double I = rate_objective(dist, sv, t, s.a0, b, qcfg);
        c.bound(std::max(0.0, I - s.Lambda), 1e-9, at_b(b) + fmt(", (s, t) = (%.4g, %.4g)", sv, t));
      }
    });
    report.results.push_back(c.done());
  }

  {
    Check c("outer objective grows toward both grid ends");
    for_each_solution([&](double b, const SaddleSolution& s) {
      for (double f : {cfg.search.lo_factor, cfg.search.hi_factor}) {
        const InnerResult r = inner_max_t(dist, f * scale, b, cfg);
        const double g = r.infinite ? kInf : r.g_max;
        c.require(g > s.Lambda, at_b(b) + fmt(", a = %.4g: %.6g vs Lambda %.6g", f * scale, g, s.Lambda));
      }
    });
    report.results.push_back(c.done());
  }

  return report;
}

}  // namespace selfnorm

#include "selfnorm/saddlepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "roots.hpp"
#include "selfnorm/error.hpp"

namespace selfnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_a_b(double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "a must be positive");
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::InvalidArgument, "b must lie in (0,1)");
}

/// Memoized inner solves along the a axis for one (dist, b).
class OuterObjective {
 public:
  OuterObjective(const DistributionModel& dist, double b, const SolverConfig& cfg)
      : dist_(dist), b_(b), cfg_(cfg) {}

  /// Inner result, or nullopt if the inner problem is infeasible or failed to converge.
  const std::optional<InnerResult>& at(double a) {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    std::optional<InnerResult> r;
    try {
      InnerResult inner = inner_max_t(dist_, a, b_, cfg_);
      inner_iterations_ += inner.iterations;
      if (!inner.infinite) r = inner;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence && e.kind() != ErrorKind::QuadratureFailure) throw;
      last_failure_ = e.what();
    }
    ++evaluations_;
    return cache_.emplace(a, std::move(r)).first->second;
  }

  double value(double a) {
    const auto& r = at(a);
    return r ? r->g_max : kInf;
  }

  /// a - E_t X: same sign as d/da sup_t g(t, a; b). +inf / -inf are not produced here.
  std::optional<double> slope_sign_fn(double a) {
    const auto& r = at(a);
    if (!r) return std::nullopt;
    return a - r->at_max.cgf.K_s;
  }

  int evaluations() const { return evaluations_; }
  int inner_iterations() const { return inner_iterations_; }
  const std::string& last_failure() const { return last_failure_; }

 private:
  const DistributionModel& dist_;
  double b_;
  const SolverConfig& cfg_;
  std::map<double, std::optional<InnerResult>> cache_;
  int evaluations_ = 0;
  int inner_iterations_ = 0;
  std::string last_failure_;
};

}  // namespace

FeasibilityWindow feasibility_window(double a, double b) {
  check_a_b(a, b);
  const double root = std::sqrt((1.0 - b) * (1.0 + b));
  const double base = a / (b * b);
  // 1 - sqrt(1 - b^2) written as b^2 / (1 + sqrt(1 - b^2)) to avoid cancellation at small b.
  const double a10 = a / (1.0 + root);
  const double a20 = base * (1.0 + root);
  return {std::min(a10, a20), std::max(a10, a20)};
}

bool is_feasible(const DistributionModel& dist, double a, double b) {
  const auto w = feasibility_window(a, b);
  return dist.support().meets_open(w.a1, w.a2);
}

InnerResult inner_max_t(const DistributionModel& dist, double a, double b, const SolverConfig& cfg) {
  check_a_b(a, b);
  InnerResult out;
  if (!is_feasible(dist, a, b)) {
    out.infinite = true;
    out.g_max = kInf;
    out.t_tilde = -kInf;
    return out;
  }

  const double tol = cfg.inner_tol * (1.0 + a * a / (b * b));
  GDerivatives best;
  double best_abs = kInf;
  auto eval = [&](double t) {
    ++out.iterations;
    GDerivatives d = g_derivatives(dist, t, a, b, cfg.quadrature);
    if (std::fabs(d.g_t) < best_abs) {
      best_abs = std::fabs(d.g_t);
      best = d;
      out.t_tilde = t;
    }
    return d;
  };

  const double b2 = b * b;
  double t0 = -1.0 / (1.0 + a * a / (b2 * b2));
  GDerivatives d0 = eval(t0);
  double lo, hi, f_lo, f_hi;
  if (std::fabs(d0.g_t) <= tol) {
    lo = hi = t0;
    f_lo = f_hi = d0.g_t;
  } else if (d0.g_t > 0.0) {
    // Root lies in (t0, 0): g_t(0-) < 0 always.
    lo = t0;
    f_lo = d0.g_t;
    double t = t0;
    for (int k = 0;; ++k) {
      if (k > 200) throw Error(ErrorKind::NoConvergence, "inner bracket search toward t = 0 failed");
      t *= 0.5;
      const double f = eval(t).g_t;
      if (f <= 0.0) {
        hi = t;
        f_hi = f;
        break;
      }
      lo = t;
      f_lo = f;
    }
  } else {
    hi = t0;
    f_hi = d0.g_t;
    double t = t0;
    for (;;) {
      t *= 2.0;
      if (t < -1e15) {
        throw Error(ErrorKind::NoConvergence,
                    "inner bracket search did not find a sign change; a lies at the feasibility boundary");
      }
      const double f = eval(t).g_t;
      if (f >= 0.0) {
        lo = t;
        f_lo = f;
        break;
      }
      hi = t;
      f_hi = f;
    }
  }

  if (lo != hi) {
    const auto r = detail::brent_root([&](double t) { return eval(t).g_t; }, lo, hi, f_lo, f_hi, tol,
                                      4.0 * std::numeric_limits<double>::epsilon(), cfg.max_iterations);
    if (!r.converged) throw Error(ErrorKind::NoConvergence, "inner root search hit the iteration cap");
  }

  out.at_max = best;
  out.g_max = best.g;
  out.residual = best_abs;
  return out;
}

double rate_objective(const DistributionModel& dist, double s, double t, double a, double b,
                      const QuadratureConfig& cfg) {
  try {
    return s * a + t * a * a / (b * b) - cgf(dist, TiltPoint{s, t}, cfg).K;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainDiverges) return -kInf;
    throw;
  }
}

SaddleSolution outer_min_a(const DistributionModel& dist, double b, const SolverConfig& cfg) {
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::InvalidArgument, "b must lie in (0,1)");
  const auto& search = cfg.search;
  if (!(search.lo_factor > 0.0 && search.hi_factor > search.lo_factor && search.points_per_decade >= 1)) {
    throw Error(ErrorKind::InvalidArgument, "invalid outer search grid");
  }

  OuterObjective obj(dist, b, cfg);
  const double scale = dist.scale();
  const double step = std::pow(10.0, 1.0 / search.points_per_decade);
  std::vector<double> grid;
  for (double f = search.lo_factor; f <= search.hi_factor * (1.0 + 1e-12); f *= step) {
    grid.push_back(scale * f);
  }

  SaddleSolution sol;
  sol.b = b;

  auto argmin = [&] {
    std::size_t best = grid.size();
    double best_v = kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = obj.value(grid[i]);
      if (v < best_v) {
        best_v = v;
        best = i;
      }
    }
    return best;
  };

  std::size_t i_min = argmin();
  if (i_min == grid.size()) {
    sol.infeasible = true;
    sol.Lambda = kInf;
    sol.w = kInf;
    sol.outer_iterations = obj.evaluations();
    sol.inner_iterations = obj.inner_iterations();
    return sol;
  }
  // A minimum on the grid edge means the search range was too narrow; widen it.
  for (int ext = 0; ext < 40 && (i_min == 0 || i_min + 1 == grid.size()); ++ext) {
    if (i_min == 0) {
      grid.insert(grid.begin(), grid.front() / step);
    } else {
      grid.push_back(grid.back() * step);
    }
    i_min = argmin();
  }
  if (i_min == 0 || i_min + 1 == grid.size()) {
    throw Error(ErrorKind::NoConvergence, "outer minimum not bracketed by the a-grid");
  }

  double left = grid[i_min - 1], right = grid[i_min + 1];
  auto slope = [&](double a) { return obj.slope_sign_fn(a); };
  std::optional<double> s_left = slope(left), s_right = slope(right);

  if (!(s_left && s_right && *s_left < 0.0 && *s_right > 0.0)) {
    // Neighbors infeasible or noisy: narrow with a derivative-free minimization first.
    const auto m = boost::math::tools::brent_find_minima([&](double a) { return obj.value(a); }, left,
                                                         right, 40);
    const double centre = m.first;
    double delta = 1e-6 * centre;
    bool found = false;
    for (int k = 0; k < 30; ++k, delta *= 2.0) {
      const double l = centre - delta, r = centre + delta;
      if (l <= left || r >= right) break;
      s_left = slope(l);
      s_right = slope(r);
      if (s_left && s_right && *s_left < 0.0 && *s_right > 0.0) {
        left = l;
        right = r;
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorKind::NoConvergence,
                  "outer stationarity (E_t X = a) not bracketed near the minimum; the minimizer may sit "
                  "on a feasibility boundary" +
                      (obj.last_failure().empty() ? std::string() : " (" + obj.last_failure() + ")"));
    }
  }

  double a0 = left;
  auto stationarity = [&](double a) {
    const auto v = slope(a);
    if (!v) throw Error(ErrorKind::NoConvergence, "inner problem failed inside the outer bracket");
    return *v;
  };
  const auto root = detail::brent_root(
      stationarity, left, right, *s_left, *s_right, 0.1 * cfg.outer_tol * (1.0 + left), 1e-13,
      cfg.max_iterations);
  a0 = root.x;
  const double tol_a = cfg.outer_tol * (1.0 + a0);
  if (std::fabs(root.fx) > tol_a && !root.converged) {
    throw Error(ErrorKind::NoConvergence, "outer stationarity did not reach tolerance");
  }

  const InnerResult& inner = *obj.at(a0);
  sol.a0 = a0;
  sol.t_hat = inner.t_tilde;
  sol.s_hat = -2.0 * a0 * inner.t_tilde / (b * b);
  sol.Lambda = inner.g_max;
  sol.cgf = inner.at_max.cgf;
  sol.g_tt = inner.at_max.g_tt;
  sol.residual_t = std::fabs(inner.at_max.g_t) / (1.0 + a0 * a0 / (b * b));
  sol.residual_a = std::fabs(a0 - inner.at_max.cgf.K_s) / (1.0 + a0);
  sol.outer_iterations = obj.evaluations();
  sol.inner_iterations = obj.inner_iterations();
  sol.w = std::sqrt(2.0 * std::max(0.0, sol.Lambda));
  sol.Lambda_b = -2.0 * sol.t_hat * a0 * a0 / (b * b * b);
  return sol;
}

HessianQuantities hessian_quantities(const SaddleSolution& partial) {
  const double b = partial.b;
  const double det = partial.cgf.delta_det;
  if (!(det > 0.0)) {
    throw Error(ErrorKind::SingularHessian, "CGF Hessian determinant is not positive at the saddlepoint");
  }
  // (1, 2a/b^2) Delta^{-1} (1, 2a/b^2)^T = Var_t(X^2 - 2aX/b^2) / det Delta = -g_tt / det.
  const double quad_form = -partial.g_tt / det;
  HessianQuantities h;
  h.delta_det = det;
  h.Lambda_aa = 2.0 * partial.t_hat / (b * b) + quad_form;
  h.Lambda_b = -2.0 * partial.t_hat * partial.a0 * partial.a0 / (b * b * b);
  if (!(h.Lambda_aa > 0.0)) {
    throw Error(ErrorKind::SingularHessian, "Lambda_aa is not positive at the saddlepoint");
  }
  return h;
}

SaddleSolution solve(const DistributionModel& dist, double b, const SolverConfig& cfg) {
  SaddleSolution sol = outer_min_a(dist, b, cfg);
  if (sol.infeasible) return sol;
  const HessianQuantities h = hessian_quantities(sol);
  sol.delta_det = h.delta_det;
  sol.Lambda_aa = h.Lambda_aa;
  sol.Lambda_b = h.Lambda_b;
  sol.v = -sol.t_hat * std::sqrt(h.delta_det) * std::sqrt(h.Lambda_aa);
  return sol;
}

}  // namespace selfnorm

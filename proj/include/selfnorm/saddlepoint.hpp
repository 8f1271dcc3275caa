#pragma once

#include <limits>

#include "selfnorm/distribution.hpp"
#include "selfnorm/quadrature.hpp"
#include "selfnorm/tilted_cgf.hpp"

namespace selfnorm {

/// Roots of h(x) = x^2 - 2ax/b^2 + a^2/b^2, ordered: the interval where h < 0.
struct FeasibilityWindow {
  double a1 = 0.0;
  double a2 = 0.0;
};

FeasibilityWindow feasibility_window(double a, double b);

/// True iff (a1, a2) meets the support, i.e. sup_t g(t, a; b) is finite.
bool is_feasible(const DistributionModel& dist, double a, double b);

/// Log-grid used to bracket the outer minimum: a in [lo, hi] * dist.scale().
struct OuterSearch {
  double lo_factor = 1e-3;
  double hi_factor = 1e3;
  int points_per_decade = 4;
};

struct SolverConfig {
  QuadratureConfig quadrature;
  OuterSearch search;
  int max_iterations = 200;
  /// Inner stopping rule: |g_t| <= inner_tol * (1 + a^2/b^2).
  double inner_tol = 1e-10;
  /// Outer stopping rule: |E_t X - a| <= outer_tol * (1 + a).
  double outer_tol = 1e-10;
};

struct InnerResult {
  double t_tilde = 0.0;
  double g_max = 0.0;
  /// sup over t < 0 is +infinity (the window misses the support).
  bool infinite = false;
  double residual = 0.0;
  int iterations = 0;
  GDerivatives at_max;
};

/// Maximizes the concave map t -> g(t, a; b) over t < 0.
InnerResult inner_max_t(const DistributionModel& dist, double a, double b, const SolverConfig& cfg = {});

struct SaddleSolution {
  double b = 0.0;
  double a0 = 0.0;
  double t_hat = 0.0;
  double s_hat = 0.0;
  double Lambda = 0.0;
  double w = 0.0;
  double v = 0.0;
  double Lambda_aa = 0.0;
  double Lambda_b = 0.0;
  double delta_det = 0.0;
  double residual_t = 0.0;
  double residual_a = 0.0;
  /// d^2 g / dt^2 at the solution; negative by concavity.
  double g_tt = 0.0;
  int inner_iterations = 0;
  int outer_iterations = 0;
  /// No feasible a exists: the upper tail is 0 and w = +infinity.
  bool infeasible = false;
  CgfValue cgf;
};

/// Minimizes a -> sup_t g(t, a; b) over feasible a > 0. Fills a0, t_hat,
/// s_hat, Lambda, the residuals and the CGF at the saddlepoint; the Hessian
/// fields are left for hessian_quantities.
SaddleSolution outer_min_a(const DistributionModel& dist, double b, const SolverConfig& cfg = {});

struct HessianQuantities {
  double delta_det = 0.0;
  double Lambda_aa = 0.0;
  double Lambda_b = 0.0;
};

/// det Delta, Lambda_aa = 2t/b^2 + (1, 2a/b^2) Delta^{-1} (1, 2a/b^2)^T and
/// Lambda_b = -2 t a^2 / b^3 at a solved (a0, t_hat). Throws SingularHessian.
HessianQuantities hessian_quantities(const SaddleSolution& partial);

/// Full solve: outer_min_a followed by w = sqrt(2 Lambda), v = -t sqrt(det) sqrt(Lambda_aa).
SaddleSolution solve(const DistributionModel& dist, double b, const SolverConfig& cfg = {});

/// I(s, t; a, b) = s a + t a^2/b^2 - K(s, t).
double rate_objective(const DistributionModel& dist, double s, double t, double a, double b,
                      const QuadratureConfig& cfg = {});

}  // namespace selfnorm

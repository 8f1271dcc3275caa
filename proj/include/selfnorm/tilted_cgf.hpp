#pragma once

#include "selfnorm/cgf_value.hpp"
#include "selfnorm/distribution.hpp"
#include "selfnorm/quadrature.hpp"

namespace selfnorm {

struct TiltPoint {
  double s = 0.0;  ///< tilt on X
  double t = 0.0;  ///< tilt on X^2
};

/// K(s,t) and its first two derivatives by quadrature of the tilted density.
///
/// Throws DomainDiverges when t >= 0 and the tilted integral does not converge,
/// QuadratureFailure when the error target is not met.
CgfValue cgf(const DistributionModel& dist, TiltPoint point, const QuadratureConfig& cfg = {});

/// g(t, a; b) = -t a^2/b^2 - K(-2 a t / b^2, t). Returns -infinity when the
/// tilted integral diverges (t > 0 with heavy tails).
double g_value(const DistributionModel& dist, double t, double a, double b,
               const QuadratureConfig& cfg = {});

/// dg/dt = -a^2/b^2 - E_t[Z] with Z = X^2 - 2aX/b^2.
double g_dt(const DistributionModel& dist, double t, double a, double b, const QuadratureConfig& cfg = {});

/// d^2g/dt^2 = -Var_t[Z].
double g_dtt(const DistributionModel& dist, double t, double a, double b,
             const QuadratureConfig& cfg = {});

/// g and its t-derivatives from a single CGF evaluation.
struct GDerivatives {
  double g = 0.0;
  double g_t = 0.0;
  double g_tt = 0.0;
  CgfValue cgf;
};

GDerivatives g_derivatives(const DistributionModel& dist, double t, double a, double b,
                           const QuadratureConfig& cfg = {});

}  // namespace selfnorm

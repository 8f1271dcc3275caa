#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace selfnorm::detail {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent-Dekker root finding on a sign-changing bracket [a, b].
/// Stops once |f(x)| <= ftol or the bracket is at xtol_rel relative width.
template <class F>
RootResult brent_root(F&& f, double a, double b, double fa, double fb, double ftol, double xtol_rel,
                      int max_iter) {
  RootResult r;
  if (std::fabs(fa) <= ftol) return {a, fa, 0, true};
  if (std::fabs(fb) <= ftol) return {b, fb, 0, true};
  if ((fa > 0) == (fb > 0)) return {b, fb, 0, false};

  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 1; iter <= max_iter; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
                       0.5 * xtol_rel * std::fabs(b);
    const double m = 0.5 * (c - b);
    if (std::fabs(fb) <= ftol || std::fabs(m) <= tol) {
      return {b, fb, iter, std::fabs(fb) <= ftol || std::fabs(m) <= tol};
    }
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc, rb = fb / fc;
        p = s * (2.0 * m * qa * (qa - rb) - (b - a) * (rb - 1.0));
        q = (qa - 1.0) * (rb - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : (m > 0 ? tol : -tol);
    fb = f(b);
    r = {b, fb, iter, false};
  }
  return r;
}

}  // namespace selfnorm::detail

#include "selfnorm/quadrature.hpp"

#include "selfnorm/error.hpp"

namespace selfnorm {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "quadrature tolerances must be positive");
  }
  if (max_subdivisions < 10) {
    throw Error(ErrorKind::InvalidArgument, "max_subdivisions must be at least 10");
  }
  if (!(truncation_exponent > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "truncation_exponent must be positive");
  }
}

ScalarIntegral integrate_line(const std::function<double(double)>& f, double lo, double hi,
                              const QuadratureConfig& cfg, double anchor, double width) {
  cfg.validate();
  if (!(lo < hi)) return {0.0, 0.0, true};
  constexpr double half_pi = 0.5 * std::numbers::pi;

  std::function<double(double)> g;
  double u0 = 0.0, u1 = 0.0;
  const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);
  if (lo_inf && hi_inf) {
    g = [&](double u) {
      const double c = std::cos(u);
      return f(anchor + width * std::tan(u)) * width / (c * c);
    };
    u0 = -half_pi;
    u1 = half_pi;
  } else if (hi_inf) {
    g = [&](double u) {
      const double c = std::cos(u);
      return f(lo + width * std::tan(u)) * width / (c * c);
    };
    u1 = half_pi;
  } else if (lo_inf) {
    g = [&](double u) {
      const double c = std::cos(u);
      return f(hi - width * std::tan(u)) * width / (c * c);
    };
    u1 = half_pi;
  } else {
    g = f;
    u0 = lo;
    u1 = hi;
  }

  auto vec = [&](double u) {
    const double v = g(u);
    return std::array<double, 1>{std::isfinite(v) ? v : 0.0};
  };
  constexpr int kPieces = 16;
  std::vector<double> bp(kPieces + 1);
  for (int i = 0; i <= kPieces; ++i) bp[i] = u0 + (u1 - u0) * i / kPieces;
  const auto r = integrate_panels<1>(vec, bp, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions);
  return {r.value[0], r.error[0], r.converged};
}

}  // namespace selfnorm

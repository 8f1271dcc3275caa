#include "selfnorm/approximations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfnorm/error.hpp"
#include "selfnorm/gaussian.hpp"

namespace selfnorm {

namespace {

void check_n(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be at least 2, got " + std::to_string(n));
}

void check_finite_b(double b) {
  if (!std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "b must be finite");
}

void clamp_probability(TailEstimate& est) {
  if (std::isnan(est.probability)) {
    throw Error(ErrorKind::NoConvergence, "tail formula produced NaN at b = " + std::to_string(est.b));
  }
  if (est.probability < 0.0 || est.probability > 1.0) {
    est.probability = std::clamp(est.probability, 0.0, 1.0);
    est.warnings.push_back(TailWarning::clamped);
  }
}

double lugannani_rice(double w, double v, int n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double z = rn * w;
  return gaussian::sf(z) - gaussian::pdf(z) / rn * (1.0 / w - 1.0 / v);
}

TailEstimate saddle_positive(const DistributionModel& dist, int n, double b, const SolverConfig& cfg) {
  TailEstimate est;
  est.method = Method::saddlepoint;
  est.b = b;
  est.n = n;
  SaddleSolution sol = solve(dist, b, cfg);
  if (sol.infeasible) {
    est.probability = 0.0;
    est.warnings.push_back(TailWarning::infeasible_zero);
  } else {
    est.probability = lugannani_rice(sol.w, sol.v, n);
  }
  est.diagnostics = std::move(sol);
  return est;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::saddlepoint: return "saddlepoint";
    case Method::normal: return "normal";
    case Method::edgeworth: return "edgeworth";
    case Method::large_deviation: return "large_deviation";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "saddle" || text == "saddlepoint") return Method::saddlepoint;
  if (text == "normal") return Method::normal;
  if (text == "edgeworth") return Method::edgeworth;
  if (text == "ld" || text == "large_deviation") return Method::large_deviation;
  if (text == "mc" || text == "monte_carlo") return Method::monte_carlo;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

std::string_view to_string(TailWarning w) noexcept {
  switch (w) {
    case TailWarning::small_b_fallback: return "small_b_fallback";
    case TailWarning::clamped: return "clamped";
    case TailWarning::infeasible_zero: return "infeasible_zero";
  }
  return "unknown";
}

bool TailEstimate::has_warning(TailWarning w) const noexcept {
  return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

TailEstimate saddle_upper_tail(const DistributionModel& dist, int n, double b, const SolverConfig& cfg) {
  check_n(n);
  check_finite_b(b);
  const double ab = std::fabs(b);
  TailEstimate est;
  est.method = Method::saddlepoint;
  est.b = b;
  est.n = n;

  if (b == 0.0) {
    est.probability = 0.5;
    est.warnings.push_back(TailWarning::small_b_fallback);
    return est;
  }
  if (ab == 1.0) {
    // X-bar / V-bar = 1 needs all X_i equal and positive: a null event for a continuous law.
    est.probability = b > 0.0 ? 0.0 : 1.0;
    est.warnings.push_back(TailWarning::infeasible_zero);
    return est;
  }
  if (ab < kMinAbsB || ab > kMaxAbsB) {
    throw Error(ErrorKind::DomainUnsupported,
                "saddlepoint tail needs 0.01 <= |b| <= 0.99, got b = " + std::to_string(b) +
                    "; use Monte Carlo instead");
  }

  if (b > 0.0) {
    est = saddle_positive(dist, n, b, cfg);
  } else {
    // P(S/V >= b) = 1 - P(-S/V > -b), the latter on the law of -X.
    est = saddle_positive(dist.reflected(), n, -b, cfg);
    est.probability = 1.0 - est.probability;
    est.b = b;
  }
  clamp_probability(est);
  return est;
}

TailEstimate normal_tail(int n, double b, NormalScaling scaling) {
  check_n(n);
  check_finite_b(b);
  const double m = scaling == NormalScaling::sqrt_n ? n : n - 1;
  TailEstimate est;
  est.method = Method::normal;
  est.b = b;
  est.n = n;
  est.probability = gaussian::sf(std::sqrt(m) * b);
  return est;
}

TailEstimate edgeworth_tail(const DistributionModel& dist, int n, double b) {
  check_n(n);
  check_finite_b(b);
  const auto& mom = dist.moments();
  if (!mom.variance || !mom.skewness) {
    throw Error(ErrorKind::MomentUndefined,
                "Edgeworth expansion needs finite variance and skewness; '" + dist.name() + "' has none");
  }
  const double rn = std::sqrt(static_cast<double>(n));
  const double z = rn * b;
  const double k3 = *mom.skewness;
  TailEstimate est;
  est.method = Method::edgeworth;
  est.b = b;
  est.n = n;
  est.probability = gaussian::sf(z) - gaussian::pdf(z) * k3 * (2.0 * z * z + 1.0) / (6.0 * rn);
  clamp_probability(est);
  return est;
}

TailEstimate large_deviation_tail(const DistributionModel& dist, int n, double b, const SolverConfig& cfg) {
  check_n(n);
  if (!(b > 0.0 && b < 1.0)) {
    throw Error(ErrorKind::DomainUnsupported, "large deviation tail needs 0 < b < 1, got " + std::to_string(b));
  }
  TailEstimate est;
  est.method = Method::large_deviation;
  est.b = b;
  est.n = n;
  SaddleSolution sol = solve(dist, b, cfg);
  if (sol.infeasible) {
    est.probability = 0.0;
    est.warnings.push_back(TailWarning::infeasible_zero);
  } else {
    est.probability = std::exp(-n * sol.Lambda);
  }
  est.diagnostics = std::move(sol);
  clamp_probability(est);
  return est;
}

double b_of_t(double t, int n) {
  check_n(n);
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "t must be finite");
  return t / std::sqrt(n - 1.0 + t * t);
}

double t_of_b(double b, int n) {
  check_n(n);
  if (!(std::fabs(b) < 1.0)) {
    throw Error(ErrorKind::DomainUnsupported, "t_of_b needs |b| < 1, got " + std::to_string(b));
  }
  return b * std::sqrt((n - 1.0) / ((1.0 - b) * (1.0 + b)));
}

TailEstimate upper_tail(const DistributionModel& dist, int n, double b, Method method, const SolverConfig& cfg) {
  switch (method) {
    case Method::saddlepoint: return saddle_upper_tail(dist, n, b, cfg);
    case Method::normal: return normal_tail(n, b);
    case Method::edgeworth: return edgeworth_tail(dist, n, b);
    case Method::large_deviation: return large_deviation_tail(dist, n, b, cfg);
    case Method::monte_carlo: break;
  }
  throw Error(ErrorKind::InvalidArgument, "Monte Carlo tails are computed by the montecarlo module");
}

TailEstimate student_t_upper_tail(const DistributionModel& dist, int n, double t, Method method,
                                  const SolverConfig& cfg) {
  return upper_tail(dist, n, b_of_t(t, n), method, cfg);
}

}  // namespace selfnorm

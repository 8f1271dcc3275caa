#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "selfnorm/distribution.hpp"
#include "selfnorm/saddlepoint.hpp"

namespace selfnorm {

enum class Method { saddlepoint, normal, edgeworth, large_deviation, monte_carlo };

std::string_view to_string(Method m) noexcept;
/// Accepts the long names and the CLI short forms saddle, ld, mc.
Method parse_method(std::string_view text);

enum class TailWarning { small_b_fallback, clamped, infeasible_zero };

std::string_view to_string(TailWarning w) noexcept;

struct TailEstimate {
  double probability = 0.0;
  Method method = Method::saddlepoint;
  double b = 0.0;
  int n = 0;
  std::vector<TailWarning> warnings;
  std::optional<SaddleSolution> diagnostics;

  bool has_warning(TailWarning w) const noexcept;
};

/// Threshold window of the saddlepoint path; outside it the 1/w - 1/v term is unreliable.
inline constexpr double kMinAbsB = 0.01;
inline constexpr double kMaxAbsB = 0.99;

/// P(mean(X) / sqrt(mean(X^2)) >= b) by 1 - Phi(sqrt(n) w) - phi(sqrt(n) w) (1/w - 1/v) / sqrt(n).
///
/// b < 0 is answered on the law of -X. b = 0 returns 1/2 flagged small_b_fallback;
/// b = 1 and b = -1 return 0 and 1 flagged infeasible_zero. Other |b| outside
/// [0.01, 0.99] throw DomainUnsupported.
TailEstimate saddle_upper_tail(const DistributionModel& dist, int n, double b, const SolverConfig& cfg = {});

/// Normalizer of the Normal comparator: 1 - Phi(b sqrt(n)) or 1 - Phi(b sqrt(n - 1)).
enum class NormalScaling { sqrt_n, sqrt_n_minus_1 };

TailEstimate normal_tail(int n, double b, NormalScaling scaling = NormalScaling::sqrt_n);

/// 1 - Phi(z) - phi(z) k3 (2 z^2 + 1) / (6 sqrt(n)) with z = sqrt(n) b.
/// Throws MomentUndefined unless variance and skewness are finite.
TailEstimate edgeworth_tail(const DistributionModel& dist, int n, double b);

/// exp(-n Lambda(a0, b)) for 0 < b < 1.
TailEstimate large_deviation_tail(const DistributionModel& dist, int n, double b, const SolverConfig& cfg = {});

/// {T_n >= t} = {mean(X)/sqrt(mean(X^2)) >= t / sqrt(n + t^2 - 1)}.
double b_of_t(double t, int n);
double t_of_b(double b, int n);

/// Tail of the analytic method at the threshold of the self-normalized sum
/// equivalent to T_n >= t. Monte Carlo is served by the montecarlo module.
TailEstimate student_t_upper_tail(const DistributionModel& dist, int n, double t, Method method,
                                  const SolverConfig& cfg = {});

/// Dispatch on an analytic method.
TailEstimate upper_tail(const DistributionModel& dist, int n, double b, Method method, const SolverConfig& cfg = {});

}  // namespace selfnorm

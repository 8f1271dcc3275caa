#pragma once

#include <cstdint>
#include <string_view>

#include "selfnorm/distribution.hpp"

namespace selfnorm {

struct McConfig {
  std::uint64_t reps = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t batch_size = 65'536;
  /// OpenMP threads; 0 uses the runtime default. Never changes the result.
  int workers = 0;

  void validate() const;
};

struct McEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;
  /// Replicates whose statistic was undefined (zero norm or zero spread); counted as misses.
  std::uint64_t degenerate = 0;
  std::string_view generator;
};

/// Fraction of replicates with mean(X) / sqrt(mean(X^2)) >= b.
///
/// Batch k of cfg.batch_size replicates draws from substream (seed, k); the
/// integer hit counts are summed, so the result does not depend on the worker count.
McEstimate estimate_tail(const DistributionModel& dist, int n, double b, const McConfig& cfg = {});

/// Fraction of replicates with sqrt(n) mean(X) / S >= t, S the sample standard deviation.
McEstimate estimate_student_t_tail(const DistributionModel& dist, int n, double t, const McConfig& cfg = {});

namespace detail {

/// Single-threaded reference kernels; same streams, same answers.
McEstimate estimate_tail_serial(const DistributionModel& dist, int n, double b, const McConfig& cfg);
McEstimate estimate_student_t_tail_serial(const DistributionModel& dist, int n, double t, const McConfig& cfg);

}  // namespace detail

}  // namespace selfnorm

#include "selfnorm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <omp.h>

#include "selfnorm/error.hpp"
#include "selfnorm/random.hpp"

namespace selfnorm {

namespace {

enum class Statistic { self_normalized, student_t };

struct Counts {
  std::uint64_t hits = 0;
  std::uint64_t degenerate = 0;
};

void check_inputs(const DistributionModel& dist, int n, double threshold, const McConfig& cfg) {
  cfg.validate();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be at least 2, got " + std::to_string(n));
  if (std::isnan(threshold)) throw Error(ErrorKind::InvalidArgument, "threshold is NaN");
  if (!dist.has_quantile()) {
    throw Error(ErrorKind::SamplerUnavailable,
                "distribution '" + dist.name() + "' has no quantile function; Monte Carlo is unavailable");
  }
}

Counts run_batch(const DistributionModel& dist, int n, double threshold, Statistic stat, const McConfig& cfg,
                 std::uint64_t k, std::vector<double>& x) {
  const std::uint64_t begin = k * cfg.batch_size;
  const std::uint64_t count = std::min(cfg.batch_size, cfg.reps - begin);
  Xoshiro256 rng(cfg.seed, k);
  Counts c;
  const double dn = n;
  for (std::uint64_t r = 0; r < count; ++r) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = dist.quantile(rng.uniform_open());
      sum += x[i];
    }
    if (stat == Statistic::self_normalized) {
      double sq = 0.0;
      for (int i = 0; i < n; ++i) sq += x[i] * x[i];
      if (!(sq > 0.0) || !std::isfinite(sq)) {
        ++c.degenerate;
        continue;
      }
      if (sum / std::sqrt(dn * sq) >= threshold) ++c.hits;
    } else {
      const double mean = sum / dn;
      double ss = 0.0;
      for (int i = 0; i < n; ++i) ss += (x[i] - mean) * (x[i] - mean);
      if (!(ss > 0.0) || !std::isfinite(ss)) {
        ++c.degenerate;
        continue;
      }
      if (std::sqrt(dn) * mean / std::sqrt(ss / (dn - 1.0)) >= threshold) ++c.hits;
    }
  }
  return c;
}

std::uint64_t batch_count(const McConfig& cfg) { return (cfg.reps + cfg.batch_size - 1) / cfg.batch_size; }

McEstimate finish(const Counts& c, const McConfig& cfg) {
  McEstimate est;
  est.reps = cfg.reps;
  est.seed = cfg.seed;
  est.hits = c.hits;
  est.degenerate = c.degenerate;
  est.generator = Xoshiro256::kName;
  est.p_hat = static_cast<double>(c.hits) / static_cast<double>(cfg.reps);
  est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(cfg.reps));
  est.ci95_low = std::max(0.0, est.p_hat - 1.96 * est.std_err);
  est.ci95_high = std::min(1.0, est.p_hat + 1.96 * est.std_err);
  return est;
}

McEstimate run_serial(const DistributionModel& dist, int n, double threshold, Statistic stat,
                      const McConfig& cfg) {
  check_inputs(dist, n, threshold, cfg);
  std::vector<double> x(n);
  Counts total;
  const std::uint64_t batches = batch_count(cfg);
  for (std::uint64_t k = 0; k < batches; ++k) {
    const Counts c = run_batch(dist, n, threshold, stat, cfg, k, x);
    total.hits += c.hits;
    total.degenerate += c.degenerate;
  }
  return finish(total, cfg);
}

McEstimate run_parallel(const DistributionModel& dist, int n, double threshold, Statistic stat,
                        const McConfig& cfg) {
  check_inputs(dist, n, threshold, cfg);
  const auto batches = static_cast<std::int64_t>(batch_count(cfg));
  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
  std::uint64_t hits = 0, degenerate = 0;
#pragma omp parallel num_threads(threads) reduction(+ : hits, degenerate)
  {
    std::vector<double> x(n);
#pragma omp for schedule(dynamic)
    for (std::int64_t k = 0; k < batches; ++k) {
      const Counts c = run_batch(dist, n, threshold, stat, cfg, static_cast<std::uint64_t>(k), x);
      hits += c.hits;
      degenerate += c.degenerate;
    }
  }
  return finish(Counts{hits, degenerate}, cfg);
}

}  // namespace

void McConfig::validate() const {
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be at least 1");
  if (batch_size < 1) throw Error(ErrorKind::InvalidArgument, "batch_size must be at least 1");
  if (workers < 0) throw Error(ErrorKind::InvalidArgument, "workers must be nonnegative");
}

McEstimate estimate_tail(const DistributionModel& dist, int n, double b, const McConfig& cfg) {
  return run_parallel(dist, n, b, Statistic::self_normalized, cfg);
}

McEstimate estimate_student_t_tail(const DistributionModel& dist, int n, double t, const McConfig& cfg) {
  return run_parallel(dist, n, t, Statistic::student_t, cfg);
}

namespace detail {

McEstimate estimate_tail_serial(const DistributionModel& dist, int n, double b, const McConfig& cfg) {
  return run_serial(dist, n, b, Statistic::self_normalized, cfg);
}

McEstimate estimate_student_t_tail_serial(const DistributionModel& dist, int n, double t, const McConfig& cfg) {
  return run_serial(dist, n, t, Statistic::student_t, cfg);
}

}  // namespace detail

}  // namespace selfnorm

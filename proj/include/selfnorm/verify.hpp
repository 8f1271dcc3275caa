#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selfnorm/distribution.hpp"
#include "selfnorm/saddlepoint.hpp"

namespace selfnorm {

struct PropertyResult {
  std::string name;
  bool passed = false;
  /// Worst observed value or the first failing case.
  std::string detail;
};

struct VerifyReport {
  std::vector<PropertyResult> results;

  bool all_passed() const noexcept;
};

/// Numerical checks of the solver's structural properties over b_grid:
/// g(0) = 0, g decreasing in t past its maximizer, signs of (a0, t, s),
/// Hessian positivity, residuals, w increasing in b, restart uniqueness,
/// closed-form CGF agreement, finite-difference derivatives, envelope identity,
/// concavity at the maximizer, dominance of the rate function and growth of the
/// outer objective toward the ends of the a-grid.
VerifyReport run_verify(const DistributionModel& dist, const std::vector<double>& b_grid, std::uint64_t seed,
                        const SolverConfig& cfg = {});

}  // namespace selfnorm

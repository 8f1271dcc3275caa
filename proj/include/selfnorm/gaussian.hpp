#pragma once

namespace selfnorm::gaussian {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kSqrt2 = 1.41421356237309504880168872421;

double pdf(double z) noexcept;
/// Phi(z), via erfc so both tails keep full relative precision.
double cdf(double z) noexcept;
/// 1 - Phi(z) without cancellation.
double sf(double z) noexcept;
/// Inverse of Phi on (0, 1). Wichura's AS 241 (PPND16), ~1e-16 relative.
double quantile(double p);

}  // namespace selfnorm::gaussian

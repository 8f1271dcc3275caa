#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfnorm/cgf_value.hpp"
#include "selfnorm/support.hpp"

namespace selfnorm {

/// Analytic moment metadata. An empty optional means "undefined" (infinite or nonexistent).
struct Moments {
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> skewness;
};

/// Closed-form K(s,t), valid for t < t_upper.
struct ClosedFormCgf {
  std::function<CgfValue(double s, double t)> eval;
  double t_upper = 0.0;

  bool valid_at(double t) const noexcept { return t < t_upper; }
};

/// An immutable continuous law on the real line.
///
/// The density is held in log form so tilted integrands can be formed as
/// exp(s x + t x^2 + log f(x) - M) without intermediate overflow. log_density
/// returns -inf outside the support.
class DistributionModel {
 public:
  using LogDensityFn = std::function<double(double)>;
  using QuantileFn = std::function<double(double)>;

  struct Options {
    std::optional<QuantileFn> quantile;
    Moments moments;
    std::optional<ClosedFormCgf> closed_form_cgf;
    /// Typical spread (interquartile range), used to size quadrature panels and search grids.
    double scale = 1.0;
    /// A point of high density, used as a quadrature anchor.
    double center = 0.0;
  };

  DistributionModel(std::string name, LogDensityFn log_density, SupportSpec support, Options options);

  const std::string& name() const noexcept { return name_; }
  const SupportSpec& support() const noexcept { return support_; }

  double log_density(double x) const;
  double density(double x) const;

  bool has_quantile() const noexcept { return quantile_.has_value(); }
  /// Inverse CDF. Throws SamplerUnavailable when the model has none.
  double quantile(double p) const;

  const Moments& moments() const noexcept { return moments_; }
  const std::optional<ClosedFormCgf>& closed_form_cgf() const noexcept { return cgf_; }
  double scale() const noexcept { return scale_; }
  double center() const noexcept { return center_; }

  /// Law of -X.
  DistributionModel reflected() const;
  /// Law of factor * X, factor > 0.
  DistributionModel scaled(double factor) const;

 private:
  std::string name_;
  LogDensityFn log_density_;
  SupportSpec support_;
  std::optional<QuantileFn> quantile_;
  Moments moments_;
  std::optional<ClosedFormCgf> cgf_;
  double scale_;
  double center_;
};

/// Built-in names: normal, centered_exponential (alias exp), t2, cauchy.
DistributionModel make_builtin(std::string_view name);
std::vector<std::string> builtin_names();

double quantile(const DistributionModel& dist, double p);

/// count i.i.d. draws by inverse CDF over substream 0 of seed.
std::vector<double> sample(const DistributionModel& dist, std::size_t count, std::uint64_t seed);

inline const Moments& moments(const DistributionModel& dist) noexcept { return dist.moments(); }

}  // namespace selfnorm

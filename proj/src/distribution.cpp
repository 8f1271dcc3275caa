#include "selfnorm/distribution.hpp"

#include <cmath>
#include <numbers>

#include "selfnorm/error.hpp"
#include "selfnorm/gaussian.hpp"
#include "selfnorm/random.hpp"

namespace selfnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "quantile requires p in (0,1), got " + std::to_string(p));
  }
}

// Tilted N(mu, var) with mu = s var, var = 1/(1-2t).
CgfValue gaussian_cgf(double s, double t) {
  const double one_minus = 1.0 - 2.0 * t;
  const double var = 1.0 / one_minus;
  const double mu = s * var;
  CgfValue v;
  v.K = s * s / (2.0 * one_minus) - 0.5 * std::log(one_minus);
  v.K_s = mu;
  v.K_t = var + mu * mu;
  v.K_ss = var;
  v.K_st = 2.0 * mu * var;
  v.K_tt = 2.0 * var * var + 4.0 * mu * mu * var;
  v.delta_det = 2.0 * var * var * var;
  return v;
}

DistributionModel make_normal() {
  DistributionModel::Options o;
  o.quantile = [](double p) { return gaussian::quantile(p); };
  o.moments = Moments{0.0, 1.0, 0.0};
  o.closed_form_cgf = ClosedFormCgf{gaussian_cgf, 0.5};
  o.scale = 2.0 * gaussian::quantile(0.75);
  o.center = 0.0;
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi);
  return DistributionModel(
      "normal", [log_norm](double x) { return log_norm - 0.5 * x * x; }, SupportSpec::real_line(),
      std::move(o));
}

DistributionModel make_centered_exponential() {
  DistributionModel::Options o;
  o.quantile = [](double p) { return -std::log1p(-p) - 1.0; };
  o.moments = Moments{0.0, 1.0, 2.0};
  o.scale = std::log(3.0);
  o.center = std::log(2.0) - 1.0;
  return DistributionModel(
      "centered_exponential", [](double x) { return -(x + 1.0); }, SupportSpec::half_line_from(-1.0),
      std::move(o));
}

DistributionModel make_t2() {
  DistributionModel::Options o;
  // F^{-1}(p) = (2p - 1) / sqrt(2 p (1 - p)) for two degrees of freedom.
  o.quantile = [](double p) { return (2.0 * p - 1.0) / std::sqrt(2.0 * p * (1.0 - p)); };
  o.moments = Moments{0.0, std::nullopt, std::nullopt};
  o.scale = 2.0 * 0.5 / std::sqrt(2.0 * 0.75 * 0.25);
  o.center = 0.0;
  const double log_norm = -1.5 * std::log(2.0);
  return DistributionModel(
      "t2", [log_norm](double x) { return log_norm - 1.5 * std::log1p(0.5 * x * x); },
      SupportSpec::real_line(), std::move(o));
}

DistributionModel make_cauchy() {
  DistributionModel::Options o;
  o.quantile = [](double p) { return std::tan(std::numbers::pi * (p - 0.5)); };
  o.moments = Moments{std::nullopt, std::nullopt, std::nullopt};
  o.scale = 2.0;
  o.center = 0.0;
  const double log_norm = -std::log(std::numbers::pi);
  return DistributionModel(
      "cauchy", [log_norm](double x) { return log_norm - std::log1p(x * x); },
      SupportSpec::real_line(), std::move(o));
}

}  // namespace

DistributionModel::DistributionModel(std::string name, LogDensityFn log_density, SupportSpec support,
                                     Options options)
    : name_(std::move(name)),
      log_density_(std::move(log_density)),
      support_(std::move(support)),
      quantile_(std::move(options.quantile)),
      moments_(options.moments),
      cgf_(std::move(options.closed_form_cgf)),
      scale_(options.scale),
      center_(options.center) {
  if (!log_density_) throw Error(ErrorKind::InvalidArgument, "density callable is empty");
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw Error(ErrorKind::InvalidArgument, "scale must be positive and finite");
  }
  if (!support_.contains(center_)) {
    // Anchor must sit inside the support; fall back to a point near the first interval.
    const auto& iv = support_.intervals().front();
    if (std::isfinite(iv.lower) && std::isfinite(iv.upper)) {
      center_ = 0.5 * (iv.lower + iv.upper);
    } else if (std::isfinite(iv.lower)) {
      center_ = iv.lower + scale_;
    } else {
      center_ = iv.upper - scale_;
    }
  }
}

double DistributionModel::log_density(double x) const {
  if (!support_.contains(x)) return -kInf;
  return log_density_(x);
}

double DistributionModel::density(double x) const { return std::exp(log_density(x)); }

double DistributionModel::quantile(double p) const {
  check_probability(p);
  if (!quantile_) {
    throw Error(ErrorKind::SamplerUnavailable, "distribution '" + name_ + "' has no quantile function");
  }
  return (*quantile_)(p);
}

DistributionModel DistributionModel::reflected() const {
  Options o;
  if (quantile_) {
    o.quantile = [q = *quantile_](double p) { return -q(1.0 - p); };
  }
  o.moments.mean = moments_.mean ? std::optional<double>(-*moments_.mean) : std::nullopt;
  o.moments.variance = moments_.variance;
  o.moments.skewness = moments_.skewness ? std::optional<double>(-*moments_.skewness) : std::nullopt;
  if (cgf_) {
    o.closed_form_cgf = ClosedFormCgf{[f = cgf_->eval](double s, double t) {
                                        CgfValue v = f(-s, t);
                                        v.K_s = -v.K_s;
                                        v.K_st = -v.K_st;
                                        return v;
                                      },
                                      cgf_->t_upper};
  }
  o.scale = scale_;
  o.center = -center_;
  return DistributionModel(
      name_ + "[reflected]", [f = log_density_](double x) { return f(-x); }, support_.reflected(),
      std::move(o));
}

DistributionModel DistributionModel::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::InvalidArgument, "scale factor must be positive and finite");
  }
  Options o;
  if (quantile_) {
    o.quantile = [q = *quantile_, factor](double p) { return factor * q(p); };
  }
  o.moments.mean = moments_.mean ? std::optional<double>(factor * *moments_.mean) : std::nullopt;
  o.moments.variance =
      moments_.variance ? std::optional<double>(factor * factor * *moments_.variance) : std::nullopt;
  o.moments.skewness = moments_.skewness;
  if (cgf_) {
    const double c = factor;
    o.closed_form_cgf = ClosedFormCgf{[f = cgf_->eval, c](double s, double t) {
                                        CgfValue v = f(c * s, c * c * t);
                                        v.K_s *= c;
                                        v.K_t *= c * c;
                                        v.K_ss *= c * c;
                                        v.K_st *= c * c * c;
                                        v.K_tt *= c * c * c * c;
                                        v.delta_det *= c * c * c * c * c * c;
                                        return v;
                                      },
                                      cgf_->t_upper / (c * c)};
  }
  o.scale = factor * scale_;
  o.center = factor * center_;
  const double log_factor = std::log(factor);
  return DistributionModel(
      name_ + "[x" + std::to_string(factor) + "]",
      [f = log_density_, factor, log_factor](double x) { return f(x / factor) - log_factor; },
      support_.scaled(factor), std::move(o));
}

DistributionModel make_builtin(std::string_view name) {
  if (name == "normal") return make_normal();
  if (name == "centered_exponential" || name == "exp") return make_centered_exponential();
  if (name == "t2") return make_t2();
  if (name == "cauchy") return make_cauchy();
  throw Error(ErrorKind::UnknownDistribution, "unknown built-in distribution '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() { return {"normal", "centered_exponential", "t2", "cauchy"}; }

double quantile(const DistributionModel& dist, double p) { return dist.quantile(p); }

std::vector<double> sample(const DistributionModel& dist, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "sample count must be positive");
  if (!dist.has_quantile()) {
    throw Error(ErrorKind::SamplerUnavailable, "distribution '" + dist.name() + "' has no quantile function");
  }
  Xoshiro256 rng(seed, 0);
  std::vector<double> out(count);
  for (auto& x : out) x = dist.quantile(rng.uniform_open());
  return out;
}

}  // namespace selfnorm

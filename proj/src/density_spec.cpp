#include "selfnorm/density_spec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "selfnorm/error.hpp"
#include "selfnorm/expression.hpp"

namespace selfnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void fail_line(int line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

double parse_bound(std::string_view w, int line) {
  if (w == "inf" || w == "+inf") return kInf;
  if (w == "-inf") return -kInf;
  double v = 0.0;
  const char* first = w.data();
  if (!w.empty() && w.front() == '+') ++first;
  const auto r = std::from_chars(first, w.data() + w.size(), v);
  if (r.ec != std::errc() || r.ptr != w.data() + w.size() || !std::isfinite(v)) {
    fail_line(line, "bad number '" + std::string(w) + "'");
  }
  return v;
}

Expression parse_expression(std::string_view text, std::string_view variable, int line) {
  try {
    return Expression::parse(text, variable);
  } catch (const Error& e) {
    fail_line(line, e.what());
  }
}

std::optional<double> parse_moment(std::string_view w, int line) {
  if (w == "undefined" || w == "-") return std::nullopt;
  return parse_bound(w, line);
}

/// x with CDF(x) = p by bisection on the integrated density.
double invert_cdf(const std::function<double(double)>& density, const SupportSpec& support, double p,
                  const QuadratureConfig& cfg) {
  auto cdf = [&](double x) {
    const double lo = support.infimum();
    if (x <= lo) return 0.0;
    return integrate_line(density, lo, x, cfg).value;
  };
  double lo = support.infimum(), hi = support.supremum();
  if (!std::isfinite(lo)) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    while (cdf(lo) > p) lo = 2.0 * lo - 1.0;
  }
  if (!std::isfinite(hi)) {
    hi = lo + 1.0;
    while (cdf(hi) < p) hi = hi + 2.0 * (hi - lo);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + std::fabs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DistributionModel parse_density_spec(std::string_view text, std::string_view fallback_name,
                                     const QuadratureConfig& cfg) {
  std::string name(fallback_name);
  std::vector<Interval> intervals;
  std::optional<Expression> density;
  std::optional<Expression> quantile;
  Moments moments;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) fail_line(line, "expected 'key: value'");
    const std::string_view key = trim(s.substr(0, colon));
    const std::string_view value = trim(s.substr(colon + 1));
    if (key == "name") {
      if (value.empty()) fail_line(line, "empty name");
      name = std::string(value);
    } else if (key == "support") {
      const auto w = split_words(value);
      if (w.size() != 2) fail_line(line, "support needs two endpoints");
      const double a = parse_bound(w[0], line), b = parse_bound(w[1], line);
      if (!(a < b)) fail_line(line, "support endpoints must satisfy lower < upper");
      intervals.push_back(Interval{a, b, std::isfinite(a), std::isfinite(b)});
    } else if (key == "density") {
      if (density) fail_line(line, "density given twice");
      density = parse_expression(value, "x", line);
    } else if (key == "quantile") {
      if (quantile) fail_line(line, "quantile given twice");
      quantile = parse_expression(value, "p", line);
    } else if (key == "moments") {
      const auto w = split_words(value);
      if (w.size() != 3) fail_line(line, "moments needs mean, variance and skewness");
      moments = Moments{parse_moment(w[0], line), parse_moment(w[1], line), parse_moment(w[2], line)};
    } else {
      fail_line(line, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!density) throw Error(ErrorKind::ParseError, "spec has no density line");
  if (intervals.empty()) intervals.push_back(Interval{});
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lower < b.lower; });
  SupportSpec support(intervals);

  const Expression f = *density;
  auto raw_density = [&f, &support](double x) {
    if (!support.contains(x)) return 0.0;
    const double v = f(x);
    if (std::isnan(v) || v < 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "density is negative or undefined at x = " + std::to_string(x));
    }
    return v;
  };

  double mass = 0.0;
  for (const auto& iv : support.intervals()) {
    const auto r = integrate_line(raw_density, iv.lower, iv.upper, cfg);
    if (!r.converged) {
      throw Error(ErrorKind::QuadratureFailure, "density of '" + name + "' could not be integrated");
    }
    mass += r.value;
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw Error(ErrorKind::InvalidArgument, "density of '" + name + "' does not have a finite positive integral");
  }
  const double log_mass = std::log(mass);
  std::function<double(double)> normalized = [raw_density, mass](double x) { return raw_density(x) / mass; };

  DistributionModel::Options o;
  o.moments = moments;
  double q25, q50, q75;
  if (quantile) {
    const Expression q = *quantile;
    o.quantile = [q](double p) { return q(p); };
    q25 = q(0.25);
    q50 = q(0.5);
    q75 = q(0.75);
  } else {
    q25 = invert_cdf(normalized, support, 0.25, cfg);
    q50 = invert_cdf(normalized, support, 0.5, cfg);
    q75 = invert_cdf(normalized, support, 0.75, cfg);
  }
  o.scale = q75 - q25;
  if (!(o.scale > 0.0) || !std::isfinite(o.scale)) {
    throw Error(ErrorKind::InvalidArgument, "quartiles of '" + name + "' do not give a positive spread");
  }
  o.center = q50;

  return DistributionModel(
      name,
      [f, log_mass](double x) {
        const double v = f(x);
        return v > 0.0 ? std::log(v) - log_mass : -kInf;
      },
      std::move(support), std::move(o));
}

DistributionModel load_density_spec(const std::filesystem::path& path, const QuadratureConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read density spec '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_density_spec(buf.str(), path.stem().string(), cfg);
}

DistributionModel resolve_distribution(std::string_view name) {
  constexpr std::string_view prefix = "file:";
  if (name.substr(0, prefix.size()) == prefix) {
    return load_density_spec(std::filesystem::path(std::string(name.substr(prefix.size()))));
  }
  return make_builtin(name);
}

}  // namespace selfnorm

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace selfnorm {

struct QuadratureConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  /// Contributions below exp(-truncation_exponent) of the peak are dropped.
  double truncation_exponent = 745.0;

  void validate() const;
};

template <std::size_t N>
struct PanelIntegral {
  std::array<double, N> value{};
  std::array<double, N> error{};
  /// Integral of |f_k|; the scale used for relative tolerances.
  std::array<double, N> l1{};
  int panels = 0;
  bool converged = false;
};

namespace detail {

template <std::size_t N>
struct Panel {
  double a;
  double b;
  std::array<double, N> value;
  std::array<double, N> error;
  std::array<double, N> l1;
  double badness = 0.0;
};

/// One Gauss-Kronrod 21-point panel for a vector-valued integrand.
template <std::size_t N, class F>
Panel<N> gk21_panel(const F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);

  Panel<N> p{a, b, {}, {}, {}, 0.0};
  std::array<double, N> gauss{};
  // gauss<10> has an even order: its nodes sit at the odd Kronrod indices.
  {
    const std::array<double, N> f0 = f(mid);
    for (std::size_t k = 0; k < N; ++k) {
      p.value[k] = wk[0] * f0[k];
      p.l1[k] = wk[0] * std::fabs(f0[k]);
    }
  }
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double dx = half * xk[i];
    const std::array<double, N> fp = f(mid + dx);
    const std::array<double, N> fm = f(mid - dx);
    for (std::size_t k = 0; k < N; ++k) {
      p.value[k] += wk[i] * (fp[k] + fm[k]);
      p.l1[k] += wk[i] * (std::fabs(fp[k]) + std::fabs(fm[k]));
      if (i & 1) gauss[k] += wg[i / 2] * (fp[k] + fm[k]);
    }
  }
  const double scale = std::fabs(half);
  for (std::size_t k = 0; k < N; ++k) {
    p.value[k] *= half;
    p.l1[k] *= scale;
    gauss[k] *= half;
    p.error[k] = std::fabs(p.value[k] - gauss[k]);
  }
  return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of a vector-valued integrand over
/// a sorted list of finite breakpoints. All components share the same panels;
/// the panel with the largest normalized error is bisected until every
/// component satisfies error <= rel_tol * l1 + abs_tol.
template <std::size_t N, class F>
PanelIntegral<N> integrate_panels(const F& f, std::span<const double> breakpoints, double rel_tol,
                                  double abs_tol, int max_subdivisions) {
  using detail::Panel;
  PanelIntegral<N> out;
  if (breakpoints.size() < 2) {
    out.converged = true;
    return out;
  }

  auto cmp = [](const Panel<N>& l, const Panel<N>& r) { return l.badness < r.badness; };
  std::priority_queue<Panel<N>, std::vector<Panel<N>>, decltype(cmp)> heap(cmp);

  std::array<double, N> total{}, err{}, l1{};
  auto add = [&](const Panel<N>& p, double sign) {
    for (std::size_t k = 0; k < N; ++k) {
      total[k] += sign * p.value[k];
      err[k] += sign * p.error[k];
      l1[k] += sign * p.l1[k];
    }
  };
  auto badness = [&](const Panel<N>& p) {
    double worst = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      worst = std::max(worst, p.error[k] / (rel_tol * l1[k] + abs_tol));
    }
    return worst;
  };

  std::vector<Panel<N>> initial;
  initial.reserve(breakpoints.size());
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) continue;
    initial.push_back(detail::gk21_panel<N>(f, breakpoints[i], breakpoints[i + 1]));
    add(initial.back(), 1.0);
  }
  for (auto& p : initial) {
    p.badness = badness(p);
    heap.push(std::move(p));
  }

  auto done = [&] {
    for (std::size_t k = 0; k < N; ++k) {
      if (err[k] > rel_tol * l1[k] + abs_tol) return false;
    }
    return true;
  };

  int splits = 0;
  while (!heap.empty() && !done()) {
    if (splits >= max_subdivisions) break;
    Panel<N> worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) break;  // panel at ulp resolution
    heap.pop();
    add(worst, -1.0);
    Panel<N> left = detail::gk21_panel<N>(f, worst.a, mid);
    Panel<N> right = detail::gk21_panel<N>(f, mid, worst.b);
    add(left, 1.0);
    add(right, 1.0);
    left.badness = badness(left);
    right.badness = badness(right);
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++splits;
  }

  // Re-sum from the final panels to drop accumulated add/subtract rounding.
  total = {};
  err = {};
  l1 = {};
  out.panels = static_cast<int>(heap.size());
  while (!heap.empty()) {
    add(heap.top(), 1.0);
    heap.pop();
  }
  out.value = total;
  out.error = err;
  out.l1 = l1;
  out.converged = done();
  return out;
}

struct ScalarIntegral {
  double value = 0.0;
  double error = 0.0;
  bool converged = false;
};

/// Scalar integral over [lo, hi], endpoints possibly infinite. Infinite ends are
/// mapped to a finite range with x = anchor + width * tan(u).
ScalarIntegral integrate_line(const std::function<double(double)>& f, double lo, double hi,
                              const QuadratureConfig& cfg = {}, double anchor = 0.0, double width = 1.0);

}  // namespace selfnorm

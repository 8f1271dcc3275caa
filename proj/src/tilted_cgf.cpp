#include "selfnorm/tilted_cgf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "selfnorm/error.hpp"

namespace selfnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tilted law summarized by its mean and central moments.
struct TiltedLaw {
  /// K = offset + log_mass with offset = s r + t r^2 for the reference point r;
  /// for t < 0 the same offset is also local_offset - t c^2.
  double offset = 0.0;
  double local_offset = 0.0;
  double log_mass = 0.0;
  double mean = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double rel_error = 0.0;
};

/// s x + t x^2 + log f(x) expanded around a reference point r:
///   exponent(x) = (s + 2 t r)(x - r) + t (x - r)^2 + log f(x),
/// with the constant s r + t r^2 split off. Moving r to the peak keeps full
/// precision when the tilt is large or the peak lies far from the origin.
class TiltedIntegrand {
 public:
  TiltedIntegrand(const DistributionModel& dist, double s, double t) : dist_(dist), s_(s), t_(t) {
    set_reference(t < 0.0 ? -s / (2.0 * t) : 0.0);
  }

  void set_reference(double r) {
    r_ = r;
    if (t_ < 0.0) {
      const double c = -s_ / (2.0 * t_);
      slope_ = 2.0 * t_ * (r - c);
      local_offset_ = t_ * (r - c) * (r - c);
    } else {
      slope_ = s_ + 2.0 * t_ * r;
      local_offset_ = s_ * r + t_ * r * r;
    }
  }

  double exponent(double x) const {
    const double y = x - r_;
    const double e = slope_ * y + t_ * y * y + dist_.log_density(x);
    return std::isnan(e) ? -kInf : e;
  }

  double offset() const { return s_ * r_ + t_ * r_ * r_; }
  /// d/dx of s x + t x^2.
  double slope_at(double x) const { return slope_ + 2.0 * t_ * (x - r_); }
  /// t (r - c)^2 when t < 0, c = -s / 2t; the offset otherwise.
  double local_offset() const { return local_offset_; }

 private:
  const DistributionModel& dist_;
  double s_;
  double t_;
  double r_ = 0.0;
  double slope_ = 0.0;
  double local_offset_ = 0.0;
};

void check_convergence(const DistributionModel& dist, const TiltedIntegrand& tilt, double t) {
  if (t < 0.0) return;
  // The tail of the tilted integrand must decay on both sides; growth between
  // the outer probes means exp(s x + t x^2) beats the density.
  for (double sign : {1.0, -1.0}) {
    const double x100 = sign * 100.0, x1000 = sign * 1000.0;
    if (!dist.support().contains(x100) || !dist.support().contains(x1000)) continue;
    const double e10 = tilt.exponent(sign * 10.0);
    const double e100 = tilt.exponent(x100);
    const double e1000 = tilt.exponent(x1000);
    if (e1000 > e100 || (e1000 == e100 && e100 > e10)) {
      throw Error(ErrorKind::DomainDiverges,
                  "E exp(sX + tX^2) diverges for '" + dist.name() + "' at t = " + std::to_string(t));
    }
  }
}

TiltedLaw tilted_law(const DistributionModel& dist, double s, double t, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(s) || !std::isfinite(t)) {
    throw Error(ErrorKind::InvalidArgument, "tilt point must be finite");
  }
  TiltedIntegrand tilt(dist, s, t);
  check_convergence(dist, tilt, t);

  const double trunc = cfg.truncation_exponent;
  double width = dist.scale();
  if (t < 0.0) width = std::min(width, 1.0 / std::sqrt(-2.0 * t));
  const double h0 = 0.25 * width;

  double peak = -kInf;
  double peak_x = dist.center();
  std::vector<std::pair<double, double>> probes;

  struct Piece {
    double lo, hi;
    std::vector<double> keys;
  };
  std::vector<Piece> pieces;

  for (const auto& iv : dist.support().intervals()) {
    auto clamp_in = [&](double x) {
      if (x <= iv.lower) return std::isfinite(iv.lower) ? iv.lower : x;
      if (x >= iv.upper) return std::isfinite(iv.upper) ? iv.upper : x;
      return x;
    };
    std::vector<double> keys;
    keys.push_back(clamp_in(dist.center()));
    if (t < 0.0) keys.push_back(clamp_in(-s / (2.0 * t)));
    if (std::isfinite(iv.lower)) keys.push_back(iv.lower);
    if (std::isfinite(iv.upper)) keys.push_back(iv.upper);

    for (double k : keys) {
      const double e = tilt.exponent(k);
      probes.emplace_back(k, e);
      if (e > peak) {
        peak = e;
        peak_x = k;
      }
    }

    // Walk outward from each anchor until the integrand is below the truncation level.
    double left = kInf, right = -kInf;
    for (double k : keys) {
      for (double dir : {-1.0, 1.0}) {
        double edge = k;
        for (int j = 0;; ++j) {
          double x = k + dir * h0 * std::ldexp(1.0, j);
          const double bound = dir < 0 ? iv.lower : iv.upper;
          if ((dir < 0 && x <= bound) || (dir > 0 && x >= bound)) {
            if (std::isfinite(bound)) {
              edge = bound;
              break;
            }
          }
          if (!std::isfinite(x) || j > 2000) {
            throw Error(ErrorKind::DomainDiverges,
                        "tilted integrand does not decay for '" + dist.name() + "'");
          }
          const double e = tilt.exponent(x);
          probes.emplace_back(x, e);
          if (e > peak) {
            peak = e;
            peak_x = x;
          }
          edge = x;
          if (e < peak - trunc) break;
        }
        left = std::min(left, edge);
        right = std::max(right, edge);
      }
    }
    left = std::max(left, iv.lower);
    right = std::min(right, iv.upper);
    if (left < right) pieces.push_back(Piece{left, right, std::move(keys)});
  }

  if (!std::isfinite(peak)) {
    throw Error(ErrorKind::QuadratureFailure, "tilted density vanishes at every probe point");
  }

  // Polish the peak between the neighbouring probes; it anchors panels and centers the moments.
  std::sort(probes.begin(), probes.end());
  const auto best = std::max_element(probes.begin(), probes.end(),
                                     [](const auto& l, const auto& r) { return l.second < r.second; });
  const double lo = best == probes.begin() ? best->first : std::prev(best)->first;
  const double hi = std::next(best) == probes.end() ? best->first : std::next(best)->first;
  if (lo < hi) {
    std::uintmax_t iters = 200;
    const auto m = boost::math::tools::brent_find_minima([&](double x) { return -tilt.exponent(x); }, lo, hi,
                                                         std::numeric_limits<double>::digits / 2, iters);
    if (-m.second > peak) {
      peak = -m.second;
      peak_x = m.first;
    }
  }

  const double pivot = peak_x;
  tilt.set_reference(pivot);
  peak = tilt.exponent(pivot);
  if (!std::isfinite(peak)) {
    throw Error(ErrorKind::QuadratureFailure, "tilted density vanishes at its located peak");
  }
  // Far from the origin the exponent itself carries rounding of order
  // eps * (|log f| + |x d/dx exponent|); no panel refinement can beat that.
  const double log_f = dist.log_density(pivot);
  const double noise = 32.0 * std::numeric_limits<double>::epsilon() *
                       (std::fabs(log_f) + std::fabs(pivot * tilt.slope_at(pivot)));
  const double rel_tol = std::max(cfg.rel_tol, noise);

  auto integrand = [&](double x) {
    const double w = std::exp(tilt.exponent(x) - peak);
    const double y = x - pivot;
    const double wy = w * y;
    const double wy2 = wy * y;
    return std::array<double, 5>{w, wy, wy2, wy2 * y, wy2 * y * y};
  };

  std::array<double, 5> total{};
  std::array<double, 5> l1{};
  double err0 = 0.0;
  int budget = cfg.max_subdivisions;
  for (auto& piece : pieces) {
    piece.keys.push_back(pivot);
    std::vector<double> bp{piece.lo, piece.hi};
    for (double k : piece.keys) {
      if (!(k > piece.lo && k < piece.hi)) continue;
      bp.push_back(k);
      for (double dir : {-1.0, 1.0}) {
        for (int j = 0;; ++j) {
          const double x = k + dir * h0 * std::ldexp(1.0, j);
          if (!(x > piece.lo && x < piece.hi)) break;
          bp.push_back(x);
        }
      }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    const auto r = integrate_panels<5>(integrand, bp, rel_tol, cfg.abs_tol, budget);
    if (!r.converged) {
      throw Error(ErrorKind::QuadratureFailure,
                  "tilted moments did not converge for '" + dist.name() + "' at (s,t) = (" +
                      std::to_string(s) + ", " + std::to_string(t) + ")");
    }
    budget = std::max(10, budget - r.panels);
    for (std::size_t k = 0; k < 5; ++k) {
      total[k] += r.value[k];
      l1[k] += r.l1[k];
    }
    err0 += r.error[0];
  }

  if (!(total[0] > 0.0)) {
    throw Error(ErrorKind::QuadratureFailure, "tilted mass underflowed for '" + dist.name() + "'");
  }

  const double r1 = total[1] / total[0];
  const double r2 = total[2] / total[0];
  const double r3 = total[3] / total[0];
  const double r4 = total[4] / total[0];

  TiltedLaw law;
  law.offset = tilt.offset();
  law.local_offset = tilt.local_offset();
  law.log_mass = peak + std::log(total[0]);
  law.mean = pivot + r1;
  law.c2 = std::max(0.0, r2 - r1 * r1);
  law.c3 = r3 - 3.0 * r1 * r2 + 2.0 * r1 * r1 * r1;
  law.c4 = std::max(0.0, r4 - 4.0 * r1 * r3 + 6.0 * r1 * r1 * r2 - 3.0 * r1 * r1 * r1 * r1);
  law.rel_error = err0 / total[0];
  return law;
}

CgfValue to_cgf(const TiltedLaw& law) {
  const double mu = law.mean;
  CgfValue v;
  v.K = law.offset + law.log_mass;
  v.K_s = mu;
  v.K_t = law.c2 + mu * mu;
  v.K_ss = law.c2;
  v.K_st = law.c3 + 2.0 * mu * law.c2;
  v.K_tt = law.c4 - law.c2 * law.c2 + 4.0 * mu * law.c3 + 4.0 * mu * mu * law.c2;
  v.delta_det = law.c2 * (law.c4 - law.c2 * law.c2) - law.c3 * law.c3;
  v.quadrature_error = law.rel_error;
  return v;
}

void check_b(double b) {
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::InvalidArgument, "b must lie in (0,1)");
}

}  // namespace

CgfValue cgf(const DistributionModel& dist, TiltPoint point, const QuadratureConfig& cfg) {
  CgfValue v = to_cgf(tilted_law(dist, point.s, point.t, cfg));
  if (point.s == 0.0 && point.t == 0.0) v.K = 0.0;  // ln E 1, exactly
  return v;
}

GDerivatives g_derivatives(const DistributionModel& dist, double t, double a, double b,
                           const QuadratureConfig& cfg) {
  check_b(b);
  const double shift = a / (b * b);  // Z = (X - shift)^2 - shift^2
  const double s = -2.0 * shift * t;
  const TiltedLaw law = tilted_law(dist, s, t, cfg);
  GDerivatives out;
  out.cgf = to_cgf(law);
  if (t == 0.0 && s == 0.0) out.cgf.K = 0.0;
  // -t a^2/b^2 - K with the center offset -t shift^2 cancelled analytically.
  if (t < 0.0) {
    out.g = t * shift * shift * (1.0 - b * b) - law.local_offset - law.log_mass;
  } else {
    out.g = -t * a * a / (b * b) - out.cgf.K;
  }
  const double m = law.mean - shift;
  // -a^2/b^2 - E Z with a^2/b^2 = shift^2 b^2.
  out.g_t = shift * shift * (1.0 - b * b) - law.c2 - m * m;
  out.g_tt = -(4.0 * m * m * law.c2 + 4.0 * m * law.c3 + law.c4 - law.c2 * law.c2);
  return out;
}

double g_value(const DistributionModel& dist, double t, double a, double b, const QuadratureConfig& cfg) {
  check_b(b);
  if (t == 0.0) return 0.0;
  try {
    return g_derivatives(dist, t, a, b, cfg).g;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainDiverges) return -kInf;
    throw;
  }
}

double g_dt(const DistributionModel& dist, double t, double a, double b, const QuadratureConfig& cfg) {
  return g_derivatives(dist, t, a, b, cfg).g_t;
}

double g_dtt(const DistributionModel& dist, double t, double a, double b, const QuadratureConfig& cfg) {
  return g_derivatives(dist, t, a, b, cfg).g_tt;
}

}  // namespace selfnorm

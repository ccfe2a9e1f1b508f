#include "sphqmc/fooling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "sphqmc/error.hpp"
#include "sphqmc/geom.hpp"
#include "sphqmc/quadrature.hpp"
#include "sphqmc/special.hpp"

namespace sphqmc {
namespace {

constexpr int kOrder = 4;

// Truncated Taylor series c_0 + c_1 h + ... + c_4 h^4.
struct Jet {
  std::array<double, kOrder + 1> c{};
};

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kOrder; ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}

Jet operator*(double s, const Jet& a) {
  Jet r;
  for (int k = 0; k <= kOrder; ++k) r.c[k] = s * a.c[k];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kOrder; ++k) {
    for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
  }
  return r;
}

Jet reciprocal(const Jet& a) {
  Jet r;
  r.c[0] = 1.0 / a.c[0];
  for (int k = 1; k <= kOrder; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += a.c[j] * r.c[k - j];
    r.c[k] = -acc / a.c[0];
  }
  return r;
}

Jet exp(const Jet& a) {
  Jet r;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= kOrder; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * a.c[j] * r.c[k - j];
    r.c[k] = acc / k;
  }
  return r;
}

Jet constant(double v) {
  Jet r;
  r.c[0] = v;
  return r;
}

// Derivative of a truncated series; the top coefficient becomes unknown and is zeroed.
Jet derivative(const Jet& a) {
  Jet r;
  for (int k = 0; k < kOrder; ++k) r.c[k] = (k + 1) * a.c[k + 1];
  return r;
}

// cos x - cos y without cancellation.
double cos_diff(double x, double y) { return -2.0 * std::sin(0.5 * (x + y)) * std::sin(0.5 * (x - y)); }

struct CollarMap {
  double rho;
  double a;  // dg/dt
  explicit CollarMap(double r) : rho(r), a(2.0 / cos_diff(0.5 * r, r)) {}
  // g(cos theta), evaluated in angle form so that small collars keep full precision
  double at_angle(double theta) const {
    return (cos_diff(theta, 0.5 * rho) + cos_diff(theta, rho)) / cos_diff(0.5 * rho, rho);
  }
};

// Jet of bump(g(t)) in powers of (t - cos theta).
Jet collar_jet(const CollarMap& g, double theta) {
  Jet u;
  u.c[0] = g.at_angle(theta);
  u.c[1] = g.a;
  const double u0 = u.c[0];
  if (!(std::fabs(u0) < 1.0) || 1.0 / ((1.0 - u0) * (1.0 + u0)) > 740.0) return Jet{};
  Jet w;  // 1 - u^2 = (1 - u0)(1 + u0) - 2 u0 a h - a^2 h^2
  w.c[0] = (1.0 - u0) * (1.0 + u0);
  w.c[1] = -2.0 * u0 * g.a;
  w.c[2] = -g.a * g.a;
  return exp(constant(1.0) + (-1.0) * reciprocal(w));
}

// (1 - Delta) on zonal functions: F + d t F' - (1 - t^2) F''.
Jet apply_operator(int d, double theta, const Jet& f) {
  const double t0 = std::cos(theta);
  Jet t;
  t.c[0] = t0;
  t.c[1] = 1.0;
  Jet one_minus_t2;
  one_minus_t2.c[0] = std::sin(theta) * std::sin(theta);
  one_minus_t2.c[1] = -2.0 * t0;
  one_minus_t2.c[2] = -1.0;
  const Jet f1 = derivative(f);
  const Jet f2 = derivative(f1);
  return f + static_cast<double>(d) * (t * f1) + (-1.0) * (one_minus_t2 * f2);
}

double operator_value(int d, int s, const CollarMap& g, double theta) {
  Jet f = collar_jet(g, theta);
  for (int k = 0; k < s / 2; ++k) f = apply_operator(d, theta, f);
  return f.c[0];
}

void check_collar(int d, double rho) {
  if (d != 1 && d != 2) throw InvalidArgument("collar functions are implemented for d in {1, 2}");
  if (!(rho > 0.0 && rho < std::numbers::pi)) throw InvalidArgument("collar radius must lie in (0, pi)");
}

}  // namespace

double bump(double t) {
  if (!(std::fabs(t) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double collar_function(std::span<const double> y0, double rho, std::span<const double> x) {
  if (y0.size() != x.size()) throw InvalidArgument("collar_function: dimension mismatch");
  if (!(rho > 0.0 && rho < std::numbers::pi)) throw InvalidArgument("collar radius must lie in (0, pi)");
  double dm = 0.0;
  double dp = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    dm += (x[k] - y0[k]) * (x[k] - y0[k]);
    dp += (x[k] + y0[k]) * (x[k] + y0[k]);
  }
  const double theta = 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
  return bump(CollarMap(rho).at_angle(theta));
}

double collar_integral(int d, double rho) {
  check_collar(d, rho);
  const CollarMap g(rho);
  auto f = [&](double theta) { return bump(g.at_angle(theta)) * std::pow(std::sin(theta), d - 1); };
  const auto r = integrate(f, 0.5 * rho, rho, 1e-12, 0.0, true);
  return sphere_area_ratio(d) * r.value;
}

double collar_sobolev_norm_even(int d, double p, int s, double rho) {
  check_collar(d, rho);
  if (s != 0 && s != 2 && s != 4) throw InvalidArgument("collar norms are implemented for s in {0, 2, 4}");
  if (!(p >= 1.0)) throw InvalidArgument("collar norm requires p >= 1");
  const CollarMap g(rho);
  const double lo = 0.5 * rho;
  const double hi = rho;
  if (std::isinf(p)) {
    constexpr int kSamples = 4000;
    std::vector<double> vals(kSamples + 1);
    for (int i = 0; i <= kSamples; ++i) {
      vals[i] = std::fabs(operator_value(d, s, g, lo + (hi - lo) * i / kSamples));
    }
    double best = 0.0;
    for (int i = 1; i < kSamples; ++i) {
      if (vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) {
        auto neg = [&](double th) { return -std::fabs(operator_value(d, s, g, th)); };
        const double a = lo + (hi - lo) * (i - 1) / kSamples;
        const double b = lo + (hi - lo) * (i + 1) / kSamples;
        const auto m = boost::math::tools::brent_find_minima(neg, a, b, 52);
        best = std::max({best, vals[i], -m.second});
      }
    }
    return best;
  }
  auto f = [&](double theta) {
    return std::pow(std::fabs(operator_value(d, s, g, theta)), p) * std::pow(std::sin(theta), d - 1);
  };
  // split at a fine partition so the adaptive rule sees each lobe separately
  constexpr int kPanels = 16;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double a = lo + (hi - lo) * i / kPanels;
    const double b = lo + (hi - lo) * (i + 1) / kPanels;
    total += integrate(f, a, b, 1e-12).value;
  }
  return std::pow(sphere_area_ratio(d) * total, 1.0 / p);
}

Certificate collar_certificate(int d, const SobolevParams& params, double rho) {
  const double s = params.s;
  if (s != 2.0 && s != 4.0) throw InvalidArgument("certificates require s in {2, 4}");
  if (params.d != d) throw InvalidArgument("certificate: dimension mismatch");
  if (!(rho < std::numbers::pi)) throw InvalidArgument("certificate: hole radius must be below pi");
  Certificate c;
  c.rho = std::min(rho, 0.5 * std::numbers::pi);
  c.integral = collar_integral(d, c.rho);
  c.norm = collar_sobolev_norm_even(d, params.p, static_cast<int>(s), c.rho);
  c.value = std::fabs(c.integral) / c.norm;
  return c;
}

Certificate collar_certificate(const PointSet& ps, const SobolevParams& params) {
  return collar_certificate(ps.dim(), params, covering_radius(ps).radius);
}

double wce_lower_certificate(const PointSet& ps, const SobolevParams& params) {
  return collar_certificate(ps, params).value;
}

}  // namespace sphqmc

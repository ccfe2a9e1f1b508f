// Independent reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "sphqmc/pointset.hpp"

namespace oracle {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// 2 sum_{l=1}^{L} (1 + l^2)^{-s/2} cos(l phi), summed from the tail up in long double.
inline double circle_series(double s, double phi, long L) {
  long double acc = 0.0L;
  for (long l = L; l >= 1; --l) {
    const long double ll = static_cast<long double>(l);
    acc += std::pow(1.0L + ll * ll, -static_cast<long double>(s) / 2.0L) * std::cos(ll * phi);
  }
  return static_cast<double>(2.0L * acc);
}

// Order-2 circle kernel in closed form: pi cosh(pi - phi) / sinh(pi) - 1 on [0, 2 pi].
inline double circle_kernel_order2(double phi) {
  return std::numbers::pi * std::cosh(std::numbers::pi - phi) / std::sinh(std::numbers::pi) - 1.0;
}

// sum_{l=1}^{L} (2l+1) (1 + l(l+1))^{-sigma/2} P_l(cos theta), Legendre recurrence in long double.
inline double sphere_series(double sigma, double theta, long L) {
  const long double t = std::cos(static_cast<long double>(theta));
  long double p0 = 1.0L;
  long double p1 = t;
  long double acc = 0.0L;
  for (long l = 1; l <= L; ++l) {
    const long double ll = static_cast<long double>(l);
    acc += (2.0L * ll + 1.0L) * std::pow(1.0L + ll * (ll + 1.0L), -static_cast<long double>(sigma) / 2.0L) * p1;
    const long double p2 = ((2.0L * ll + 1.0L) * t * p1 - ll * p0) / (ll + 1.0L);
    p0 = p1;
    p1 = p2;
  }
  return static_cast<double>(acc);
}

// Clausen functions with Bernoulli-polynomial closed forms, phi in [0, 2 pi].
inline double clausen_cos2(double phi) {
  const double pi = std::numbers::pi;
  return pi * pi / 6.0 - pi * phi / 2.0 + phi * phi / 4.0;
}
inline double clausen_sin3(double phi) {
  const double pi = std::numbers::pi;
  return pi * pi * phi / 6.0 - pi * phi * phi / 4.0 + phi * phi * phi / 12.0;
}
inline double clausen_cos4(double phi) {
  const double pi = std::numbers::pi;
  return std::pow(pi, 4) / 90.0 - pi * pi * phi * phi / 12.0 + pi * std::pow(phi, 3) / 12.0 - std::pow(phi, 4) / 48.0;
}

// Z(d, l) from the gamma-function formula.
inline double harmonic_dimension(int d, long l) {
  if (l == 0) return 1.0;
  const double x = static_cast<double>(l);
  return (2.0 * x + d - 1.0) * std::exp(std::lgamma(x + d - 1.0) - std::lgamma(d) - std::lgamma(x + 1.0));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// 2 atan2(|a - b|, |a + b|), accurate for nearby and nearly antipodal points.
inline double angle(std::span<const double> a, std::span<const double> b) {
  double dm = 0.0;
  double dp = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dm += (a[k] - b[k]) * (a[k] - b[k]);
    dp += (a[k] + b[k]) * (a[k] + b[k]);
  }
  return 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
}

inline double separation(const sphqmc::PointSet& ps) {
  double best = 10.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) best = std::min(best, angle(ps.point(i), ps.point(j)));
  }
  return best;
}

inline double nearest(const sphqmc::PointSet& ps, std::span<const double> y) {
  double best = 10.0;
  for (std::size_t i = 0; i < ps.size(); ++i) best = std::min(best, angle(ps.point(i), y));
  return best;
}

// On S^2: repeatedly jump to the circumcenter of the three points nearest to y.
inline double circumcenter_ascent(const sphqmc::PointSet& ps, std::vector<double>& y) {
  double best = nearest(ps, y);
  for (int it = 0; it < 100; ++it) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < ps.size(); ++i) d.emplace_back(angle(ps.point(i), y), i);
    std::partial_sort(d.begin(), d.begin() + 3, d.end());
    const auto a = ps.point(d[0].second);
    const auto b = ps.point(d[1].second);
    const auto c = ps.point(d[2].second);
    const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
    std::vector<double> n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    const double len = std::sqrt(dot(n, n));
    if (len == 0.0) break;
    for (double& x : n) x /= dot(n, y) < 0.0 ? -len : len;
    const double val = nearest(ps, n);
    if (!(val > best + 1e-15)) break;
    best = val;
    y = n;
  }
  return best;
}

// Dense grid maximum of the distance to the nearest point, then local ascent from the best
// grid candidates (compass search on S^1, circumcenter jumps on S^2).
inline double covering_by_grid(const sphqmc::PointSet& ps, std::size_t grid) {
  const int w = ps.ambient();
  std::vector<std::pair<double, std::vector<double>>> cand;
  for (std::size_t j = 0; j < grid; ++j) {
    std::vector<double> y;
    if (w == 2) {
      const double a = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
      y = {std::cos(a), std::sin(a)};
    } else {
      const double z = 1.0 - (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(grid);
      const double r = std::sqrt(1.0 - z * z);
      const double a = static_cast<double>(j) * 2.399963229728653;
      y = {r * std::cos(a), r * std::sin(a), z};
    }
    cand.emplace_back(nearest(ps, y), std::move(y));
  }
  const std::size_t keep = std::min<std::size_t>(cand.size(), 40);
  std::partial_sort(cand.begin(), cand.begin() + keep, cand.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = -1.0;
  for (std::size_t c = 0; c < keep; ++c) {
    std::vector<double> y = cand[c].second;
    if (w == 3) {
      best = std::max(best, circumcenter_ascent(ps, y));
      continue;
    }
    double val = cand[c].first;
    double step = 0.05;
    while (step > 1e-13) {
      const double a = std::atan2(y[1], y[0]);
      bool moved = false;
      for (double sgn : {1.0, -1.0}) {
        const std::vector<double> t{std::cos(a + sgn * step), std::sin(a + sgn * step)};
        const double v = nearest(ps, t);
        if (v > val) {
          val = v;
          y = t;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::max(best, val);
  }
  return best;
}

// sqrt(N^-2 sum_{j,k} K(angle)) with a caller-supplied kernel of the angle.
inline double wce_double_sum(const sphqmc::PointSet& ps, const std::function<double(double)>& kernel) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) acc += kernel(angle(ps.point(i), ps.point(j)));
  }
  const long double n = static_cast<long double>(ps.size());
  return static_cast<double>(std::sqrt(std::max(acc / (n * n), 0.0L)));
}

// Composite Simpson rule in long double.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const long double h = (static_cast<long double>(b) - a) / n;
  long double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0L : 2.0L) * f(static_cast<double>(a + i * h));
  return static_cast<double>(acc * h / 3.0L);
}

// Uniform random point sets on S^d from a hand-rolled generator.
inline sphqmc::PointSet random_points(int d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> c;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(d + 1);
    double r = 0.0;
    for (double& v : x) {
      v = g(rng);
      r += v * v;
    }
    for (double& v : x) c.push_back(v / std::sqrt(r));
  }
  return sphqmc::PointSet(d, std::move(c), "oracle-random");
}

inline sphqmc::PointSet tetrahedron() {
  const double a = 1.0 / std::sqrt(3.0);
  return sphqmc::PointSet(2, {a, a, a, a, -a, -a, -a, a, -a, -a, -a, a}, "tetrahedron");
}

inline sphqmc::PointSet octahedron() {
  return sphqmc::PointSet(2, {1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1}, "octahedron");
}

}  // namespace oracle

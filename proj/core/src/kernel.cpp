#include "sphqmc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "clausen.hpp"
#include "sphqmc/error.hpp"
#include "sphqmc/zonal.hpp"

namespace sphqmc {
namespace {

constexpr std::size_t kMaxDegree = 10'000'000;

// binom(n, k) with overflow detection.
__extension__ using u128 = unsigned __int128;

bool checked_binomial(std::uint64_t n, std::uint64_t k, std::uint64_t& out) {
  if (k > n) {
    out = 0;
    return true;
  }
  k = std::min(k, n - k);
  u128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > static_cast<u128>(UINT64_MAX)) return false;
  }
  out = static_cast<std::uint64_t>(acc);
  return true;
}

void require_dim(int d) {
  if (d < 1) throw InvalidArgument("sphere dimension must be >= 1");
}

}  // namespace

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("exponent p must lie in [1, inf]");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

SobolevParams SobolevParams::make(int d, double p, double s) {
  require_dim(d);
  SobolevParams out;
  out.d = d;
  out.p = p;
  out.s = s;
  out.q = conjugate_exponent(p);
  const double threshold = std::isinf(p) ? 0.0 : d / p;
  if (!(s > threshold)) {
    throw InvalidArgument("Sobolev smoothness must satisfy s > d/p");
  }
  return out;
}

double gegenbauer_normalized(int d, long l, double t) {
  require_dim(d);
  if (l < 0) throw InvalidArgument("gegenbauer_normalized: degree must be >= 0");
  if (!(std::fabs(t) <= 1.0)) throw InvalidArgument("gegenbauer_normalized: |t| > 1");
  if (l == 0) return 1.0;
  double p0 = 1.0;
  double p1 = t;
  for (long k = 1; k < l; ++k) {
    const double p2 = ((2.0 * k + d - 1.0) * t * p1 - k * p0) / (k + d - 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void gegenbauer_sequence(int d, double t, std::span<double> out) {
  require_dim(d);
  if (!(std::fabs(t) <= 1.0)) throw InvalidArgument("gegenbauer_sequence: |t| > 1");
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = t;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] = ((2.0 * kd + d - 1.0) * t * out[k] - kd * out[k - 1]) / (kd + d - 1.0);
  }
}

std::uint64_t harmonic_dimension(int d, long l) {
  require_dim(d);
  if (l < 0) throw InvalidArgument("harmonic_dimension: degree must be >= 0");
  // Z(d, l) = binom(l + d, d) - binom(l + d - 2, d)
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  const auto ul = static_cast<std::uint64_t>(l);
  const auto ud = static_cast<std::uint64_t>(d);
  if (!checked_binomial(ul + ud, ud, a)) throw InvalidArgument("harmonic_dimension: overflow");
  if (l + d >= 2) {
    if (!checked_binomial(ul + ud - 2, ud, b)) throw InvalidArgument("harmonic_dimension: overflow");
  }
  return a - b;
}

double harmonic_dimension_real(int d, double l) {
  require_dim(d);
  if (l == 0.0) return 1.0;
  if (d == 1) return 2.0;
  if (d == 2) return 2.0 * l + 1.0;
  return (2.0 * l + d - 1.0) *
         std::exp(std::lgamma(l + d - 1.0) - std::lgamma(d) - std::lgamma(l + 1.0));
}

double laplace_eigenvalue(int d, double l) { return l * (l + d - 1.0); }

double bessel_symbol(int d, double s, double l) {
  return std::pow(1.0 + laplace_eigenvalue(d, l), s / 2.0);
}

double bessel_tail_bound(int d, double s, std::size_t L) {
  require_dim(d);
  if (!(s > d)) return kInf;
  const double Ld = std::max<double>(1.0, static_cast<double>(L));
  if (d == 1) return 2.0 * std::pow(Ld, 1.0 - s) / (s - 1.0);
  if (d == 2) return 2.0 * std::pow(Ld + 0.5, 2.0 - s) / (s - 2.0);
  const double cd = 2.0 * std::pow(1.0 + d, d - 1.0) / std::tgamma(static_cast<double>(d));
  return cd * std::pow(Ld, d - s) / (s - d);
}

std::size_t bessel_truncation_degree(int d, double s, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tail tolerance must be positive");
  if (!(s > d)) throw InvalidArgument("certified truncation requires s > d");
  if (bessel_tail_bound(d, s, kMaxDegree) >= tol) {
    throw InvalidArgument("tail bound cannot meet tolerance with degree <= 1e7");
  }
  std::size_t lo = 1;
  std::size_t hi = kMaxDegree;
  if (bessel_tail_bound(d, s, lo) < tol) return lo;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (bessel_tail_bound(d, s, mid) < tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

KernelSpec KernelSpec::from_tolerance(double order, int dim, double tail_tol,
                                      KernelEvaluation evaluation) {
  require_dim(dim);
  if (!(order > 0.0)) throw InvalidArgument("kernel order must be positive");
  KernelSpec spec;
  spec.order = order;
  spec.dim = dim;
  spec.tail_tol = tail_tol;
  spec.evaluation = evaluation;
  const bool closed = evaluation == KernelEvaluation::automatic && dim <= 2;
  if (!closed) spec.truncation_degree = bessel_truncation_degree(dim, order, tail_tol);
  return spec;
}

KernelSpec KernelSpec::from_degree(double order, int dim, std::size_t degree) {
  require_dim(dim);
  if (!(order > 0.0)) throw InvalidArgument("kernel order must be positive");
  KernelSpec spec;
  spec.order = order;
  spec.dim = dim;
  spec.truncation_degree = degree;
  spec.tail_tol = bessel_tail_bound(dim, order, degree);
  spec.evaluation = KernelEvaluation::truncated_series;
  return spec;
}

KernelSpec KernelSpec::rebind(double new_order, int new_dim) const {
  if (evaluation == KernelEvaluation::truncated_series && tail_tol == kInf) {
    return from_degree(new_order, new_dim, truncation_degree);
  }
  return from_tolerance(new_order, new_dim, tail_tol, evaluation);
}

KernelValue bessel_kernel_centered(const KernelSpec& spec, double t) {
  if (!(std::fabs(t) <= 1.0)) throw InvalidArgument("bessel_kernel: |t| > 1");
  if (!(spec.order > 0.0)) throw InvalidArgument("bessel_kernel: order must be positive");
  if (std::fabs(t) == 1.0 && t > 0.0 && !(spec.order > spec.dim)) {
    throw InvalidArgument("bessel_kernel: t = 1 requires s > d");
  }
  if (spec.evaluation == KernelEvaluation::automatic && spec.dim <= 2) {
    const auto kernel = make_zonal_kernel(spec.order, spec.dim);
    return {kernel->at(t), kernel->error_bound()};
  }
  const std::size_t L = spec.truncation_degree;
  std::vector<double> p(L + 1);
  gegenbauer_sequence(spec.dim, t, p);
  double sum = 0.0;
  for (std::size_t l = L; l >= 1; --l) {
    const double ld = static_cast<double>(l);
    sum += std::pow(1.0 + laplace_eigenvalue(spec.dim, ld), -spec.order / 2.0) *
           harmonic_dimension_real(spec.dim, ld) * p[l];
  }
  const double tail = bessel_tail_bound(spec.dim, spec.order, L);
  return {sum, tail + 1e-16 * static_cast<double>(L) * std::fabs(sum)};
}

KernelValue bessel_kernel(const KernelSpec& spec, double t) {
  KernelValue v = bessel_kernel_centered(spec, t);
  v.value += 1.0;
  return v;
}

double clausen_cos(double z, double phi) {
  if (!(z > 1.0)) throw InvalidArgument("clausen_cos: requires z > 1");
  if (!std::isfinite(phi)) throw InvalidArgument("clausen_cos: angle must be finite");
  return detail::ClausenExpansion(z, false)(phi);
}

double clausen_sin(double z, double phi) {
  if (!(z > 1.0)) throw InvalidArgument("clausen_sin: requires z > 1");
  if (!std::isfinite(phi)) throw InvalidArgument("clausen_sin: angle must be finite");
  const double r = std::remainder(phi, 2.0 * std::numbers::pi);
  const double v = detail::ClausenExpansion(z, true)(std::fabs(r));
  return r < 0.0 ? -v : v;
}

double bessel_kernel_circle(double s, double phi) {
  if (!std::isfinite(phi)) throw InvalidArgument("bessel_kernel_circle: angle must be finite");
  return make_zonal_kernel(s, 1)->at_angle(std::fabs(std::remainder(phi, 2.0 * std::numbers::pi)));
}

Filter make_filter() {
  auto b = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  auto psi = [b](double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = b(u);
    return a / (a + b(1.0 - u));
  };
  return Filter{[psi](double t) {
    if (t <= 0.5 || t >= 2.0) return 0.0;
    if (t <= 1.0) return psi(2.0 * t - 1.0);
    return psi(2.0 - t);
  }};
}

double filtered_bessel_kernel(const Filter& h, double s, int d, double T, double t) {
  require_dim(d);
  if (!(T >= 1.0)) throw InvalidArgument("filtered_bessel_kernel: requires T >= 1");
  if (!(std::fabs(t) <= 1.0)) throw InvalidArgument("filtered_bessel_kernel: |t| > 1");
  const auto lo = static_cast<std::size_t>(std::floor(T / 2.0)) + 1;
  const auto hi = static_cast<std::size_t>(std::ceil(2.0 * T)) - 1;
  std::vector<double> p(hi + 1);
  gegenbauer_sequence(d, t, p);
  double sum = 0.0;
  for (std::size_t l = lo; l <= hi; ++l) {
    const double ld = static_cast<double>(l);
    const double w = h(ld / T);
    if (w == 0.0) continue;
    sum += w * std::pow(1.0 + laplace_eigenvalue(d, ld), -s / 2.0) *
           harmonic_dimension_real(d, ld) * p[l];
  }
  return sum;
}

}  // namespace sphqmc

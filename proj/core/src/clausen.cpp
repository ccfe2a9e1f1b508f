#include "clausen.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "sphqmc/error.hpp"
#include "sphqmc/kernel.hpp"
#include "sphqmc/special.hpp"

namespace sphqmc::detail {
namespace {

constexpr int kSeriesTerms = 40;
constexpr double kSingularBand = 1e-4;
constexpr double kPi = std::numbers::pi;

// Distance to the nearest integer and that integer.
double nearest_integer(double z, long& k) {
  k = std::lround(z);
  return z - static_cast<double>(k);
}

double reduce_angle(double phi) {
  double r = std::fabs(std::remainder(phi, 2.0 * kPi));
  return std::min(r, kPi);
}

}  // namespace

ClausenExpansion::ClausenExpansion(double z, bool sine) : z_(z), sine_(sine) {
  long k = 0;
  const double eps = nearest_integer(z, k);
  // Ci is singular at odd integers, Si at even integers (the phi^{z-1} term meets a
  // pole of zeta).
  const bool singular_parity = sine ? (k % 2 == 0) : (std::labs(k) % 2 == 1);
  if (singular_parity && eps == 0.0 && k >= 1) {
    log_form_ = true;
  } else if (singular_parity && std::fabs(eps) < kSingularBand) {
    near_singular_ = true;
  }
  coef_.assign(kSeriesTerms, 0.0);
  double fact = 1.0;  // (2j)! or (2j+1)!
  for (int j = 0; j < kSeriesTerms; ++j) {
    if (j > 0) fact *= sine ? (2.0 * j) * (2.0 * j + 1.0) : (2.0 * j - 1.0) * (2.0 * j);
    const double arg = sine ? z - 1.0 - 2.0 * j : z - 2.0 * j;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    if (log_form_ && arg == 1.0) {
      log_index_ = j;
      const int power = sine ? 2 * j + 1 : 2 * j;
      log_coef_ = sign / fact;
      coef_[j] = sign / fact * harmonic_number(power);
      continue;
    }
    coef_[j] = sign * zeta(arg) / fact;
  }
  if (!log_form_) {
    if (std::fabs(z - std::round(z)) == 0.0 && z <= 0.0) {
      lead_ = 0.0;
    } else {
      const double g = std::tgamma(z);
      lead_ = sine ? kPi / (2.0 * g * std::sin(kPi * z / 2.0))
                   : kPi / (2.0 * g * std::cos(kPi * z / 2.0));
    }
  }
}

double ClausenExpansion::operator()(double phi) const {
  phi = reduce_angle(phi);
  if (phi == 0.0) {
    if (sine_) return 0.0;
    if (z_ <= 1.0) return kInf;
    return zeta(z_);
  }
  if (near_singular_ && phi > 1e-3) return clausen_by_summation(z_, phi, sine_);
  const double x = phi * phi;
  double acc = 0.0;
  for (int j = kSeriesTerms - 1; j >= 0; --j) acc = acc * x + coef_[j];
  if (sine_) acc *= phi;
  if (log_form_) {
    const int power = sine_ ? 2 * log_index_ + 1 : 2 * log_index_;
    acc -= log_coef_ * std::pow(phi, power) * std::log(phi);
  } else if (lead_ != 0.0) {
    acc += lead_ * std::pow(phi, z_ - 1.0);
  }
  return acc;
}

double clausen_by_summation(double z, double phi, bool sine) {
  phi = reduce_angle(phi);
  if (phi == 0.0) return sine ? 0.0 : zeta(z);
  const auto n = static_cast<long>(std::ceil((60.0 + 2.0 * std::fabs(z)) / phi));
  double sum = 0.0;
  double c = 0.0;
  for (long l = n - 1; l >= 1; --l) {
    const double a = l * phi;
    const double term = (sine ? std::sin(a) : std::cos(a)) * std::pow(static_cast<double>(l), -z);
    const double y = term - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  // sum_{l>=n} w^l f(l) = w^n sum_k c_k f^{(k)}(n), with c_k the Taylor coefficients of
  // 1 / (1 - w e^x).
  using cd = std::complex<double>;
  const cd w = std::polar(1.0, phi);
  constexpr int kMax = 80;
  std::vector<cd> ck(kMax);
  ck[0] = 1.0 / (1.0 - w);
  cd tail = ck[0] * std::pow(static_cast<double>(n), -z);
  double deriv = std::pow(static_cast<double>(n), -z);  // |f^{(k)}(n)|
  double prev = std::abs(tail);
  for (int k = 1; k < kMax; ++k) {
    cd acc = 0.0;
    double fact = 1.0;
    for (int j = 1; j <= k; ++j) {
      fact *= j;
      acc += ck[k - j] / fact;
    }
    ck[k] = w * acc / (1.0 - w);
    deriv *= (z + k - 1.0) / static_cast<double>(n);
    const cd term = ck[k] * ((k % 2 == 0) ? deriv : -deriv);
    if (std::abs(term) > prev) break;
    tail += term;
    prev = std::abs(term);
    if (prev < 1e-20) break;
  }
  tail *= std::pow(w, static_cast<double>(n));
  return sum + (sine ? tail.imag() : tail.real());
}

CircleKernelSeries::CircleKernelSeries(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("circle kernel: order must be positive");
  int m0 = 0;
  while (sigma + 2.0 * m0 < 14.0) ++m0;
  binom_.resize(m0 + 1);
  binom_[0] = 1.0;
  for (int m = 0; m < m0; ++m) binom_[m + 1] = binom_[m] * (-sigma / 2.0 - m) / (m + 1.0);
  for (int m = 0; m < m0; ++m) ci_.emplace_back(sigma + 2.0 * m, false);
  // R(l) = (1 + l^2)^{-sigma/2} - sum_{m<m0} b_m l^{-sigma-2m}
  const double bound = std::fabs(binom_[m0]);
  for (long l = 1;; ++l) {
    const double ld = static_cast<double>(l);
    double partial = 0.0;
    for (int m = 0; m < m0; ++m) partial += binom_[m] * std::pow(ld, -sigma - 2.0 * m);
    remainder_.push_back(std::pow(1.0 + ld * ld, -sigma / 2.0) - partial);
    if (l >= 2 && 2.0 * bound * std::pow(ld, -sigma - 2.0 * m0) < 1e-19) break;
  }
}

double CircleKernelSeries::operator()(double phi) const {
  phi = reduce_angle(phi);
  if (phi == 0.0) return at_zero();
  const double c1 = std::cos(phi);
  double prev = 1.0;
  double cur = c1;
  double acc = 0.0;
  for (std::size_t l = 1; l <= remainder_.size(); ++l) {
    acc += remainder_[l - 1] * cur;
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
  }
  for (std::size_t m = ci_.size(); m-- > 0;) acc += binom_[m] * ci_[m](phi);
  return 2.0 * acc;
}

double CircleKernelSeries::at_zero() const {
  if (!(sigma_ > 1.0)) throw InvalidArgument("circle kernel: diagonal requires order > 1");
  double acc = 0.0;
  for (std::size_t l = remainder_.size(); l >= 1; --l) acc += remainder_[l - 1];
  for (std::size_t m = ci_.size(); m-- > 0;) acc += binom_[m] * zeta(sigma_ + 2.0 * m);
  return 2.0 * acc;
}

}  // namespace sphqmc::detail

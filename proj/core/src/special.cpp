#include "sphqmc/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>

#include "sphqmc/error.hpp"

namespace sphqmc {

double zeta(double x) {
  if (x == 1.0) throw InvalidArgument("zeta: pole at 1");
  return boost::math::zeta(x);
}

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0)) throw InvalidArgument("hurwitz_zeta: requires s > 1");
  if (!(a > 0.0)) throw InvalidArgument("hurwitz_zeta: requires a > 0");
  // Euler-Maclaurin with the first terms summed directly.
  static constexpr std::array<double, 10> kB2j = {
      1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
      -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};
  const int direct = static_cast<int>(std::ceil(std::max(12.0, s + 4.0 - a)));
  double head = 0.0;
  for (int k = direct - 1; k >= 0; --k) head += std::pow(k + a, -s);
  const double x = a + direct;
  double sum = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // term_j = B_{2j} / (2j)! * s (s+1) ... (s+2j-2) * x^{-s-2j+1}
  double rising = s;
  double fact = 2.0;
  double xpow = std::pow(x, -s - 1.0);
  for (std::size_t j = 1; j <= kB2j.size(); ++j) {
    const double term = kB2j[j - 1] / fact * rising * xpow;
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    xpow /= x * x;
  }
  return head + sum;
}

double harmonic_number(int n) {
  double h = 0.0;
  for (int k = n; k >= 1; --k) h += 1.0 / k;
  return h;
}

double sphere_area_ratio(int d) {
  if (d < 1) throw InvalidArgument("sphere_area_ratio: d must be >= 1");
  if (d == 1) return 1.0 / std::numbers::pi;
  if (d == 2) return 0.5;
  return std::exp(std::lgamma(0.5 * (d + 1)) - std::lgamma(0.5 * d)) /
         std::sqrt(std::numbers::pi);
}

double sphere_area(int d) {
  if (d < 0) throw InvalidArgument("sphere_area: d must be >= 0");
  const double h = 0.5 * (d + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

}  // namespace sphqmc

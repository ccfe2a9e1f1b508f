#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "reference_values.hpp"
#include "sphqmc/error.hpp"
#include "sphqmc/kernel.hpp"
#include "sphqmc/zonal.hpp"

using namespace sphqmc;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST_CASE("Sobolev parameters") {
  const auto p = SobolevParams::make(2, 2.0, 1.5);
  CHECK(p.q == 2.0);
  CHECK(SobolevParams::make(1, 1.0, 1.5).q == kInf);
  CHECK(SobolevParams::make(2, kInf, 0.5).q == 1.0);
  CHECK(SobolevParams::make(2, 4.0, 1.0).q == Approx(4.0 / 3.0));
  CHECK_THROWS_AS(SobolevParams::make(2, 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(SobolevParams::make(2, 0.5, 5.0), InvalidArgument);
  CHECK_THROWS_AS(SobolevParams::make(0, 2.0, 5.0), InvalidArgument);
}

TEST_CASE("normalized Gegenbauer polynomials") {
  CHECK(gegenbauer_normalized(1, 2, std::cos(kPi / 3)) == Approx(-0.5).epsilon(1e-15));
  CHECK(gegenbauer_normalized(2, 2, 0.0) == Approx(-0.5).epsilon(1e-15));
  CHECK(std::fabs(gegenbauer_normalized(2, 25, 0.7) - ref::kLegendre25At07) <= 1e-13);
  CHECK(std::fabs(gegenbauer_normalized(3, 12, 0.3) - ref::kGegenbauerD3L12At03) <= 1e-13);
  CHECK(std::fabs(gegenbauer_normalized(5, 9, -0.45) - ref::kGegenbauerD5L9AtM045) <= 1e-13);
  for (int d : {1, 2, 4}) CHECK(gegenbauer_normalized(d, 17, 1.0) == Approx(1.0).epsilon(1e-14));
  std::vector<double> seq(30);
  gegenbauer_sequence(2, 0.7, seq);
  CHECK(seq[25] == Approx(ref::kLegendre25At07).epsilon(1e-13));
  CHECK_THROWS_AS(gegenbauer_normalized(2, 3, 1.01), InvalidArgument);
  CHECK_THROWS_AS(gegenbauer_normalized(2, -1, 0.0), InvalidArgument);
}

TEST_CASE("Chebyshev reduction on the circle") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng);
    const long l = 1 + static_cast<long>(rng() % 60);
    CHECK(gegenbauer_normalized(1, l, std::cos(a)) == Approx(std::cos(l * a)).epsilon(1e-10));
  }
}

TEST_CASE("normalized Gegenbauer values are bounded by one on a dense grid") {
  std::vector<double> seq(201);
  for (int d : {1, 2, 3, 6}) {
    for (int k = 0; k <= 2000; ++k) {
      const double t = -1.0 + k / 1000.0;
      gegenbauer_sequence(d, t, seq);
      for (double v : seq) CHECK(std::fabs(v) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("harmonic dimensions") {
  CHECK(harmonic_dimension(2, 3) == 7);
  CHECK(harmonic_dimension(1, 5) == 2);
  CHECK(harmonic_dimension(3, 4) == 25);
  CHECK(harmonic_dimension(5, 0) == 1);
  for (int d = 1; d <= 8; ++d) {
    for (long l = 0; l <= 40; ++l) {
      CHECK(static_cast<double>(harmonic_dimension(d, l)) == Approx(oracle::harmonic_dimension(d, l)).epsilon(1e-10));
      CHECK(harmonic_dimension_real(d, static_cast<double>(l)) == Approx(oracle::harmonic_dimension(d, l)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(harmonic_dimension(60, 1'000'000), InvalidArgument);
  CHECK(laplace_eigenvalue(2, 3) == 12.0);
  CHECK(bessel_symbol(1, 2.0, 3.0) == Approx(10.0));
}

TEST_CASE("circle kernel of order 2 has closed-form diagonal and antipode") {
  const auto k = KernelSpec::from_tolerance(2.0, 1, 1e-10);
  CHECK(bessel_kernel_centered(k, 1.0).value == Approx(kPi / std::tanh(kPi) - 1.0).epsilon(1e-12));
  CHECK(bessel_kernel_centered(k, -1.0).value == Approx(kPi / std::sinh(kPi) - 1.0).epsilon(1e-12));
  CHECK(bessel_kernel(k, 1.0).value == Approx(kPi / std::tanh(kPi)).epsilon(1e-12));
  CHECK(bessel_kernel_circle(2.0, 0.0) == Approx(2.1533481).epsilon(1e-7));
  CHECK(bessel_kernel_circle(2.0, kPi) == Approx(-0.727971).epsilon(1e-6));
  for (int i = 0; i <= 60; ++i) {
    const double phi = kPi * i / 60.0;
    CHECK(std::fabs(bessel_kernel_circle(2.0, phi) - oracle::circle_kernel_order2(phi)) <= 1e-12);
  }
}

TEST_CASE("truncated series on the circle converges to the closed form") {
  const auto series = KernelSpec::from_degree(2.0, 1, 10'000'000);
  CHECK(std::fabs(bessel_kernel_centered(series, 1.0).value - (kPi / std::tanh(kPi) - 1.0)) <= 1e-6);
  const auto exact = KernelSpec::from_tolerance(2.0, 1, 1e-10);
  CHECK(bessel_kernel_centered(exact, 1.0).error <= 1e-10);
}

TEST_CASE("Clausen functions") {
  CHECK(clausen_cos(2.0, 0.0) == Approx(kPi * kPi / 6).epsilon(1e-13));
  CHECK(clausen_cos(2.0, kPi) == Approx(-kPi * kPi / 12).epsilon(1e-13));
  for (double z : {1.1, 2.0, 3.5, 8.0}) CHECK(clausen_sin(z, 0.0) == 0.0);
  for (int i = 0; i <= 80; ++i) {
    const double phi = 2 * kPi * i / 80.0;
    CHECK(std::fabs(clausen_cos(2.0, phi) - oracle::clausen_cos2(phi)) <= 1e-12);
    CHECK(std::fabs(clausen_sin(3.0, phi) - oracle::clausen_sin3(phi)) <= 1e-12);
    CHECK(std::fabs(clausen_cos(4.0, phi) - oracle::clausen_cos4(phi)) <= 1e-12);
  }
  CHECK(std::fabs(clausen_cos(2.5, 1.0) - ref::kClausenCos25At1) <= 1e-12);
  CHECK(std::fabs(clausen_cos(1.3, 0.05) - ref::kClausenCos13At005) <= 1e-12 * std::fabs(ref::kClausenCos13At005));
  CHECK(std::fabs(clausen_sin(3.7, 0.3) - ref::kClausenSin37At03) <= 1e-12);
  CHECK(std::fabs(clausen_sin(1.1, 2.0) - ref::kClausenSin11At2) <= 1e-12);
  CHECK(clausen_sin(2.5, -1.0) == Approx(-clausen_sin(2.5, 1.0)).epsilon(1e-15));
  CHECK(clausen_cos(2.5, 1.0 + 2 * kPi) == Approx(clausen_cos(2.5, 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(clausen_cos(1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(clausen_sin(0.5, 0.5), InvalidArgument);
}

TEST_CASE("circle kernel against extended-precision references") {
  CHECK(rel(bessel_kernel_circle(1.5, 0.7), ref::kCircleKernel15At07) <= 1e-12);
  CHECK(rel(bessel_kernel_circle(0.75, 2.0), ref::kCircleKernel075At2) <= 1e-12);
  CHECK(rel(bessel_kernel_circle(2.2, 0.01), ref::kCircleKernel22At001) <= 1e-12);
  CHECK(rel(bessel_kernel_circle(6.0, 3.0), ref::kCircleKernel6At3) <= 1e-12);
  CHECK(rel(bessel_kernel_circle(1.5, 0.0), ref::kCircleDiagonal15) <= 1e-12);
  CHECK_THROWS_AS(bessel_kernel_circle(1.0, 0.0), InvalidArgument);
}

TEST_CASE("circle kernel agrees with the truncated series at random angles") {
  const auto series = KernelSpec::from_degree(3.0, 1, 1'000'000);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (int i = 0; i < 100; ++i) {
    const double phi = u(rng);
    CHECK(std::fabs(bessel_kernel_circle(3.0, phi) - bessel_kernel_centered(series, std::cos(phi)).value) <= 1e-9);
  }
  for (int i = 0; i < 5; ++i) {
    const double phi = u(rng);
    CHECK(std::fabs(bessel_kernel_circle(2.5, phi) - oracle::circle_series(2.5, phi, 2'000'000)) <= 1e-9);
  }
}

TEST_CASE("sphere kernel against the Legendre series") {
  for (double sigma : {3.0, 4.0, 5.5}) {
    const auto k = make_zonal_kernel(sigma, 2);
    for (double theta : {0.05, 0.4, 1.3, 2.5, kPi}) {
      const double want = oracle::sphere_series(sigma, theta, 200'000);
      CHECK_MESSAGE(std::fabs(k->at_angle(theta) - want) <= 2e-9, sigma, " ", theta);
    }
  }
  const auto k4 = make_zonal_kernel(4.0, 2);
  CHECK(std::fabs(k4->at_angle(0.0) - oracle::sphere_series(4.0, 0.0, 400'000)) <= 1e-9);
}

TEST_CASE("sphere kernel table agrees with direct integration") {
  for (double sigma : {1.5, 3.0}) {
    const auto k = make_zonal_kernel(sigma, 2);
    for (double theta : {0.01, 0.7, 2.0}) {
      CHECK(rel(k->at_angle(theta), sphere_kernel_by_integral(sigma, theta)) <= 1e-9);
    }
  }
}

TEST_CASE("sphere kernel small-angle branch is continuous") {
  for (double sigma : {1.5, 2.0, 3.0, 4.0}) {
    const auto k = make_zonal_kernel(sigma, 2);
    const double a = k->at_angle(std::ldexp(1.0, -20) * (1 - 1e-10));
    const double b = k->at_angle(std::ldexp(1.0, -20) * (1 + 1e-10));
    CHECK(std::fabs(a - b) <= 1e-8 * std::max(1.0, std::fabs(a)));
  }
}

TEST_CASE("centered sphere kernel has zero mean and Parseval norm") {
  const auto k = make_zonal_kernel(3.0, 2);
  auto f = [&](double th) { return k->at_angle(th) * std::sin(th) / 2.0; };
  auto f2 = [&](double th) { return k->at_angle(th) * k->at_angle(th) * std::sin(th) / 2.0; };
  CHECK(std::fabs(oracle::simpson(f, 0.0, kPi, 20000)) <= 1e-9);
  long double parseval = 0.0L;
  for (long l = 200000; l >= 1; --l) {
    const long double ll = l;
    parseval += (2 * ll + 1) * std::pow(1 + ll * (ll + 1), -3.0L);
  }
  const double l2 = oracle::simpson(f2, 0.0, kPi, 20000);
  CHECK(l2 == Approx(static_cast<double>(parseval)).epsilon(1e-8));
}

TEST_CASE("tail bounds and truncation degrees") {
  CHECK(bessel_tail_bound(2, 2.0, 100) == kInf);
  for (int d : {1, 2, 3}) {
    const double s = d + 1.5;
    const auto L = bessel_truncation_degree(d, s, 1e-6);
    CHECK(bessel_tail_bound(d, s, L) < 1e-6);
    CHECK(bessel_tail_bound(d, s, L - 1) >= 1e-6);
  }
  CHECK_THROWS_AS(bessel_truncation_degree(1, 1.01, 1e-14), InvalidArgument);
  CHECK_THROWS_AS(bessel_truncation_degree(2, 2.0, 1e-3), InvalidArgument);
}

TEST_CASE("doubling the truncation degree changes the kernel by less than the tail tolerance") {
  for (int d : {1, 2, 3}) {
    const double s = d + 2.0;
    const auto a = KernelSpec::from_tolerance(s, d, 1e-6, KernelEvaluation::truncated_series);
    const auto b = KernelSpec::from_degree(s, d, 2 * a.truncation_degree);
    for (double t : {-1.0, -0.3, 0.2, 0.9, 1.0}) {
      CHECK(std::fabs(bessel_kernel(a, t).value - bessel_kernel(b, t).value) < 1e-6);
    }
  }
}

TEST_CASE("truncated series in higher dimension matches the Gegenbauer oracle") {
  const auto spec = KernelSpec::from_degree(6.0, 3, 40);
  long double acc = 1.0L;
  for (long l = 1; l <= 40; ++l) {
    acc += std::pow(1.0L + l * (l + 2.0L), -3.0L) * oracle::harmonic_dimension(3, l) * gegenbauer_normalized(3, l, 0.3);
  }
  CHECK(bessel_kernel(spec, 0.3).value == Approx(static_cast<double>(acc)).epsilon(1e-13));
}

TEST_CASE("partition-of-unity filter") {
  const Filter h = make_filter();
  CHECK(h(0.5) == 0.0);
  CHECK(h(2.0) == 0.0);
  CHECK(h(1.0) == 1.0);
  CHECK(h(0.3) == 0.0);
  CHECK(h(5.0) == 0.0);
  CHECK(std::fabs(h(0.75) + h(1.5) - 1.0) <= 1e-15);
  for (int i = 0; i <= 1000; ++i) {
    const double t = 0.5 + i / 2000.0;
    CHECK(std::fabs(h(t) + h(2 * t) - 1.0) <= 1e-12);
    CHECK(h(t) >= 0.0);
    CHECK(h(t) <= 1.0);
  }
  for (double x : {1.0, 7.3, 500.0}) {
    double sum = 0.0;
    for (int m = 0; m <= 20; ++m) sum += h(x / std::ldexp(1.0, m));
    CHECK(sum == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("filtered Bessel kernels") {
  const Filter h = make_filter();
  for (double phi : {0.0, 0.4, 2.0}) {
    CHECK(filtered_bessel_kernel(h, 0.0, 1, 1.0, std::cos(phi)) == Approx(2 * std::cos(phi)).epsilon(1e-14));
  }
  double want = 0.0;
  for (int l = 3; l <= 7; ++l) want += h(l / 4.0) * (2 * l + 1);
  CHECK(filtered_bessel_kernel(h, 0.0, 2, 4.0, 1.0) == Approx(want).epsilon(1e-14));
  CHECK_THROWS_AS(filtered_bessel_kernel(h, 1.0, 2, 0.5, 0.0), InvalidArgument);
}

TEST_CASE("dyadic filtered kernels sum to the Bessel kernel") {
  const Filter h = make_filter();
  for (double phi : {0.3, 1.7, 3.0}) {
    double sum = 1.0;
    for (int m = 0; m <= 18; ++m) sum += filtered_bessel_kernel(h, 3.0, 1, std::ldexp(1.0, m), std::cos(phi));
    CHECK(std::fabs(sum - (1.0 + bessel_kernel_circle(3.0, phi))) <= 1e-10);
  }
}

namespace {

// max over angles of |filtered kernel| (1 + T^2 |x - y|^2)^2 / T^{d - s}
double localization_max(double T) {
  const Filter h = make_filter();
  const int d = 2;
  const double s = 1.0;
  double best = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double theta = kPi * i / 2000.0;
    const double dist = 2 * std::sin(theta / 2);
    const double v = std::fabs(filtered_bessel_kernel(h, s, d, T, std::cos(theta))) *
                     std::pow(1 + T * T * dist * dist, 2) / std::pow(T, d - s);
    best = std::max(best, v);
  }
  return best;
}

bool within_factor_two(std::initializer_list<double> ladder) {
  std::vector<double> m;
  for (double T : ladder) m.push_back(localization_max(T));
  const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  std::string text;
  for (double v : m) text += " " + std::to_string(v);
  MESSAGE("localization maxima" << text);
  return *hi <= 2.0 * *lo;
}

}  // namespace

TEST_CASE("localization: filtered kernels stay bounded for T in {4, 16, 64}") {
  CHECK(within_factor_two({4.0, 16.0, 64.0}));
}

TEST_CASE("filtered kernels stay bounded for T in {16, 64, 256}") {
  CHECK(within_factor_two({16.0, 64.0, 256.0}));
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>

namespace sphqmc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Conjugate exponent q with 1/p + 1/q = 1 (p = 1 gives infinity, p = infinity gives 1).
double conjugate_exponent(double p);

struct SobolevParams {
  int d = 2;
  double p = 2.0;
  double s = 1.5;
  double q = 2.0;

  // Validates d >= 1, p in [1, inf], s > d/p and fills q.
  static SobolevParams make(int d, double p, double s);
};

// Normalized Gegenbauer polynomial with P(1) = 1: Chebyshev for d = 1, Legendre for d = 2.
double gegenbauer_normalized(int d, long l, double t);

// Writes P_0(t), ..., P_{out.size()-1}(t).
void gegenbauer_sequence(int d, double t, std::span<double> out);

// Dimension Z(d, l) of the degree-l spherical harmonics on S^d. Throws on overflow.
std::uint64_t harmonic_dimension(int d, long l);

// Z(d, l) as a floating-point value, usable for large l.
double harmonic_dimension_real(int d, double l);

// lambda_l = l (l + d - 1).
double laplace_eigenvalue(int d, double l);

// (1 + lambda_l)^{s/2}.
double bessel_symbol(int d, double s, double l);

enum class KernelEvaluation {
  automatic,         // closed representation on S^1 and S^2, truncated series otherwise
  truncated_series,  // partial sum of degree L with certified tail bound
};

struct KernelSpec {
  double order = 3.0;               // s
  int dim = 2;                      // d
  std::size_t truncation_degree = 0;  // L
  double tail_tol = 1e-10;
  KernelEvaluation evaluation = KernelEvaluation::automatic;

  // Chooses L from the analytic tail bound (requires order > dim).
  static KernelSpec from_tolerance(double order, int dim, double tail_tol = 1e-10,
                                   KernelEvaluation evaluation = KernelEvaluation::automatic);
  // Fixed degree; the tail is certified only when order > dim.
  static KernelSpec from_degree(double order, int dim, std::size_t degree);

  // Same evaluation policy for another order and dimension.
  KernelSpec rebind(double order, int dim) const;
};

// Upper bound on sum_{l > L} (1 + lambda_l)^{-s/2} Z(d, l); infinite when s <= d.
double bessel_tail_bound(int d, double s, std::size_t L);

// Smallest L whose tail bound is below tol; throws if L would exceed 10^7.
std::size_t bessel_truncation_degree(int d, double s, double tol);

struct KernelValue {
  double value = 0.0;
  double error = 0.0;
};

// Zonal Bessel kernel K^(s)(t) and its centered form K^(s)(t) - 1.
KernelValue bessel_kernel(const KernelSpec& spec, double t);
KernelValue bessel_kernel_centered(const KernelSpec& spec, double t);

// Generalized Clausen functions sum_{l>=1} cos(l phi) / l^z and sum sin(l phi) / l^z, z > 1.
double clausen_cos(double z, double phi);
double clausen_sin(double z, double phi);

// Centered Bessel kernel on the circle, 2 sum_{l>=1} cos(l phi) (1 + l^2)^{-s/2}.
// Any s > 0 is accepted for phi != 0 (mod 2 pi); phi = 0 requires s > 1.
double bessel_kernel_circle(double s, double phi);

struct Filter {
  std::function<double(double)> h;
  double operator()(double t) const { return h(t); }
};

// Smooth partition-of-unity filter supported on [1/2, 2].
Filter make_filter();

// sum_l h(l/T) (1 + lambda_l)^{-s/2} Z(d, l) P_l(t); only l in (T/2, 2T) contribute.
double filtered_bessel_kernel(const Filter& h, double s, int d, double T, double t);

}  // namespace sphqmc

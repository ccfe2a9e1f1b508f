#pragma once

namespace sphqmc {

// Riemann zeta function for real x != 1, including negative arguments.
double zeta(double x);

// Hurwitz zeta sum_{k>=0} (k + a)^{-s} for s > 1, a > 0.
double hurwitz_zeta(double s, double a);

// H_n = 1 + 1/2 + ... + 1/n, H_0 = 0.
double harmonic_number(int n);

// Ratio of surface areas omega_{d-1} / omega_d of the unit spheres S^{d-1}, S^d.
double sphere_area_ratio(int d);

// Surface area of S^d.
double sphere_area(int d);

}  // namespace sphqmc

#pragma once

#include <span>
#include <vector>

#include "sphqmc/kernel.hpp"
#include "sphqmc/pointset.hpp"

namespace sphqmc {

// exp(1 - 1/(1 - t^2)) on (-1, 1), zero elsewhere.
double bump(double t);

// bump(g(y0 . x)) where g maps [cos rho, cos(rho/2)] affinely onto [-1, 1].
double collar_function(std::span<const double> y0, double rho, std::span<const double> x);

// Integral of the collar function against the normalized surface measure of S^d.
double collar_integral(int d, double rho);

// ||(1 - Delta)^{s/2} f_rho||_{L_p} for s in {0, 2, 4}, normalized measure.
double collar_sobolev_norm_even(int d, double p, int s, double rho);

struct Certificate {
  double rho = 0.0;       // radius actually used (covering radius clamped to pi/2)
  double integral = 0.0;
  double norm = 0.0;
  double value = 0.0;     // integral / norm
};

// Lower bound on the worst-case error in W_p^s from a fooling function supported in the
// collar of the largest hole. Requires even s in {2, 4} and d in {1, 2}.
Certificate collar_certificate(const PointSet& ps, const SobolevParams& params);
Certificate collar_certificate(int d, const SobolevParams& params, double rho);
double wce_lower_certificate(const PointSet& ps, const SobolevParams& params);

}  // namespace sphqmc

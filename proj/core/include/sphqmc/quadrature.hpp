#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sphqmc {

struct GaussRule {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached; the reference stays valid
// for the lifetime of the program.
const GaussRule& gauss_legendre(std::size_t n);

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod integration of f over [a, b]; b may be +infinity.
// With `strict`, throws ConvergenceError when the Gauss-Kronrod error estimate exceeds
// the requested tolerance by more than a factor of 100.
IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-12, double abs_tol = 0.0,
                            bool strict = false);

}  // namespace sphqmc

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sphqmc/kernel.hpp"
#include "sphqmc/pointset.hpp"
#include "sphqmc/zonal.hpp"

namespace sphqmc {

enum class WceMethod { closed_form_p2, circle_exact, lq_quadrature, linf_grid };

const char* to_string(WceMethod m);

struct WceResult {
  double value = 0.0;
  SobolevParams params;
  WceMethod method = WceMethod::closed_form_p2;
  std::size_t nodes = 0;     // lq_quadrature: integrand evaluations of the final rule
  double resolution = 0.0;   // linf_grid: final search step
  double err_estimate = 0.0;
  bool converged = true;
  std::vector<std::string> warnings;
};

struct QuadratureSpec {
  double rel_tol = 1e-8;
  int max_doublings = 20;
  double max_evaluations = 2e9;  // kernel evaluations allowed for the whole computation
  bool strict = true;            // throw ConvergenceError instead of returning unconverged
  double linf_resolution = 1e-4;
};

// Worst-case error in W_2^s: sqrt(N^-2 sum_j sum_k K~^(2s)(x_j . x_k)).
// The kernel order is 2s; `spec` supplies the evaluation policy and tolerance only.
WceResult wce_p2(const PointSet& ps, double s, const KernelSpec& spec = {});

// Exact W_2^s error of the N-th roots of unity with the first M omitted.
WceResult wce_circle_exact(long N, long M, double s);

// The error function A(y) = N^-1 sum_j K~^(s)(x_j . y). Kernel order is s.
class ErrorFunction {
 public:
  ErrorFunction(const PointSet& ps, double s, const KernelSpec& spec = {});

  double operator()(std::span<const double> y) const;
  // S^1 only: y = (cos t, sin t), with distances computed from angles.
  double at_angle(double t) const;
  // S^1 only: value at sorted_angles()[k] + r, with distance |r| to that point exactly.
  double near_angle(std::size_t k, double r) const;
  // Value at y where y is at geodesic distance r from point j (exactly).
  double near_point(std::size_t j, double r, std::span<const double> y) const;

  const ZonalKernel& kernel() const { return *kernel_; }
  const PointSet& points() const { return *ps_; }
  const std::vector<double>& sorted_angles() const { return angles_; }

 private:
  const PointSet* ps_;
  std::shared_ptr<const ZonalKernel> kernel_;
  std::vector<double> angles_;
};

double wce_error_function(const PointSet& ps, double s, const KernelSpec& spec,
                          std::span<const double> y);

// Worst-case error in W_p^s as the L_q norm of the error function with respect to the
// normalized surface measure; d in {1, 2}.
WceResult wce_lq(const PointSet& ps, const SobolevParams& params, const KernelSpec& spec = {},
                 const QuadratureSpec& quad = {});

}  // namespace sphqmc

#pragma once

#include <memory>

#include "sphqmc/kernel.hpp"

namespace sphqmc {

// Centered Bessel kernel of a fixed order on S^d, evaluated as a function of the
// geodesic angle between its two arguments.
class ZonalKernel {
 public:
  virtual ~ZonalKernel() = default;

  // theta in [0, pi]; theta = 0 requires order() > dim().
  virtual double at_angle(double theta) const = 0;

  // Bound on the absolute evaluation error.
  virtual double error_bound() const = 0;

  double at(double t) const;
  double order() const { return order_; }
  int dim() const { return dim_; }
  bool has_diagonal() const { return order_ > dim_; }

 protected:
  ZonalKernel(double order, int dim) : order_(order), dim_(dim) {}

 private:
  double order_;
  int dim_;
};

// Exact representation for d in {1, 2}, cached per (order, d). On S^2 the first call for
// a given order builds an interpolation table, which takes a few seconds.
std::shared_ptr<const ZonalKernel> make_zonal_kernel(double order, int dim);

// Kernel honouring spec.evaluation; the truncated series is used for d >= 3.
std::shared_ptr<const ZonalKernel> make_zonal_kernel(const KernelSpec& spec);

// Kernel on S^2 evaluated by direct numerical integration, without the table. Slow;
// used to validate the table.
double sphere_kernel_by_integral(double order, double theta);

}  // namespace sphqmc

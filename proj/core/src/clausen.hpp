#pragma once

#include <vector>

namespace sphqmc::detail {

// Ci_z (sine = false) or Si_z (sine = true) for phi in [0, pi], from the polylogarithm
// expansion about phi = 0. Valid for every real z; integer orders use the logarithmic
// form. Orders within 1e-4 of a singular integer fall back to direct summation with an
// asymptotic tail.
class ClausenExpansion {
 public:
  ClausenExpansion(double z, bool sine);
  double operator()(double phi) const;
  double order() const { return z_; }

 private:
  double z_;
  bool sine_;
  bool log_form_ = false;
  bool near_singular_ = false;
  double lead_ = 0.0;
  std::vector<double> coef_;
  int log_index_ = -1;
  double log_coef_ = 0.0;
};

// Direct partial sum plus an asymptotic tail; accurate for phi bounded away from 0.
double clausen_by_summation(double z, double phi, bool sine);

// Centered circle kernel 2 sum_{l>=1} (1 + l^2)^{-sigma/2} cos(l phi).
class CircleKernelSeries {
 public:
  explicit CircleKernelSeries(double sigma);
  double operator()(double phi) const;  // phi in [0, pi]
  double at_zero() const;               // requires sigma > 1

 private:
  double sigma_;
  std::vector<double> binom_;
  std::vector<ClausenExpansion> ci_;
  std::vector<double> remainder_;  // R(l) for l = 1, 2, ...
};

}  // namespace sphqmc::detail

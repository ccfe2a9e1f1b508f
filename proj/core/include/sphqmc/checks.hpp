#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sphqmc/csv.hpp"
#include "sphqmc/kernel.hpp"

namespace sphqmc {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;  // not run because the time budget ran out
  std::string detail;    // measured quantities
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> results;
  bool incomplete = false;
  bool passed() const;
};

// Names of the acceptance checks in run order.
const std::vector<std::string>& check_names();

CheckResult run_check(std::string_view name);

// Runs the named checks (all when empty). Checks not started within budget_seconds are
// reported as skipped and the report is flagged incomplete.
VerifyReport verify_theorems(const std::vector<std::string>& which, double budget_seconds = 1e9);

// One row per N: N,rho,wce,certificate,ratio with ratio = certificate / wce.
CsvTable covering_bound_table(const std::string& family, const std::vector<long>& n_values,
                              const SobolevParams& params);

// Uncentered convolution (1/|S^2|) int K^(a)(x.z) K^(b)(y.z) dz for x.y = cos(theta),
// by polar quadrature around each pole.
double sphere_kernel_convolution(double a, double b, double theta, double rel_tol = 1e-11);

}  // namespace sphqmc

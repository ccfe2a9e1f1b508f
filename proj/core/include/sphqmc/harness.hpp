#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sphqmc/csv.hpp"
#include "sphqmc/kernel.hpp"
#include "sphqmc/pointset.hpp"

namespace sphqmc {

struct SweepSpec {
  // Family text without the count, e.g. "circle_removed:mexp=0.6"; n= is appended per row.
  std::string family;
  std::vector<long> n_values;
  std::vector<SobolevParams> params;
  bool certificate = false;  // add a fooling certificate where s is 2 or 4
  double tol = 1e-10;        // kernel tail tolerance
  std::string output;

  void validate() const;
};

// Powers of two from lo to hi inclusive.
std::vector<long> dyadic_range(long lo, long hi);

// Spec text with n= filled in.
GeneratorSpec instantiate(const std::string& family, long n);

// Header: family,N,d,p,s,covering,separation,mesh_ratio,wce,wce_err,method,certificate,error
CsvTable run_sweep(const SweepSpec& spec);

// key=value lines: family, n (comma list or lo..hi for dyadic), s (comma list), p,
// certificate (true/false), tol, output. '#' starts a comment.
SweepSpec parse_sweep_config(std::istream& in);

}  // namespace sphqmc

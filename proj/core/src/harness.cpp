#include "sphqmc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <mutex>

#include "sphqmc/error.hpp"
#include "sphqmc/fooling.hpp"
#include "sphqmc/geom.hpp"
#include "sphqmc/parallel.hpp"
#include "sphqmc/wce.hpp"

namespace sphqmc {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_real(const std::string& v, const std::string& key, std::size_t line) {
  if (v == "inf") return kInf;
  try {
    std::size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ParseError("bad value for " + key + ": '" + v + "'", line);
  }
}

std::string fmt_param(double v) { return std::isinf(v) ? "inf" : format_double(v); }

}  // namespace

void SweepSpec::validate() const {
  if (family.empty()) throw InvalidArgument("sweep: family is required");
  if (n_values.empty()) throw InvalidArgument("sweep: no N values");
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) throw InvalidArgument("sweep: N values must be strictly increasing");
  }
  if (params.empty()) throw InvalidArgument("sweep: no Sobolev parameters");
}

std::vector<long> dyadic_range(long lo, long hi) {
  if (lo < 1 || hi < lo) throw InvalidArgument("dyadic_range: need 1 <= lo <= hi");
  std::vector<long> out;
  for (long n = lo; n <= hi; n *= 2) out.push_back(n);
  return out;
}

GeneratorSpec instantiate(const std::string& family, long n) {
  const bool has_keys = family.find(':') != std::string::npos;
  return GeneratorSpec::parse(family + (has_keys ? ",n=" : ":n=") + std::to_string(n));
}

CsvTable run_sweep(const SweepSpec& spec) {
  spec.validate();
  CsvTable table({"family", "N", "d", "p", "s", "covering", "separation", "mesh_ratio", "wce",
                  "wce_err", "method", "certificate", "error"});
  struct Job {
    long n;
    SobolevParams prm;
  };
  std::vector<Job> jobs;
  for (long n : spec.n_values) {
    for (const auto& p : spec.params) jobs.push_back({n, p});
  }
  std::vector<std::vector<std::string>> rows(jobs.size());
  // rows run one at a time; each engine parallelizes internally
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    std::vector<std::string> row(13);
    row[0] = spec.family;
    row[3] = fmt_param(job.prm.p);
    row[4] = fmt_param(job.prm.s);
    try {
      const GeneratorSpec g = instantiate(spec.family, job.n);
      const PointSet ps = generate(g);
      row[1] = std::to_string(ps.size());
      row[2] = std::to_string(ps.dim());
      const SobolevParams prm = SobolevParams::make(ps.dim(), job.prm.p, job.prm.s);
      const auto q = mesh_ratio(ps);
      row[5] = format_double(q.covering);
      row[6] = format_double(q.separation);
      row[7] = format_double(q.mesh_ratio);
      const KernelSpec ks = KernelSpec::from_tolerance(prm.s, ps.dim(), spec.tol);
      const WceResult w = prm.p == 2.0 ? wce_p2(ps, prm.s, ks) : wce_lq(ps, prm, ks);
      row[8] = format_double(w.value);
      row[9] = format_double(w.err_estimate);
      row[10] = to_string(w.method);
      if (spec.certificate && (prm.s == 2.0 || prm.s == 4.0)) {
        row[11] = format_double(collar_certificate(ps, prm).value);
      }
    } catch (const std::exception& e) {
      if (row[1].empty()) row[1] = std::to_string(job.n);
      row[12] = e.what();
    }
    rows[i] = std::move(row);
  }
  for (auto& r : rows) table.add_row(std::move(r));
  return table;
}

SweepSpec parse_sweep_config(std::istream& in) {
  SweepSpec spec;
  std::vector<double> s_values;
  std::vector<double> p_values{2.0};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "family") {
      spec.family = value;
    } else if (key == "n") {
      if (const auto dots = value.find(".."); dots != std::string::npos) {
        spec.n_values = dyadic_range(std::lround(to_real(value.substr(0, dots), key, lineno)),
                                     std::lround(to_real(value.substr(dots + 2), key, lineno)));
      } else {
        spec.n_values.clear();
        for (const auto& v : split(value, ',')) spec.n_values.push_back(std::lround(to_real(v, key, lineno)));
      }
    } else if (key == "s") {
      s_values.clear();
      for (const auto& v : split(value, ',')) s_values.push_back(to_real(v, key, lineno));
    } else if (key == "p") {
      p_values.clear();
      for (const auto& v : split(value, ',')) p_values.push_back(to_real(v, key, lineno));
    } else if (key == "certificate") {
      if (value != "true" && value != "false") throw ParseError("certificate must be true or false", lineno);
      spec.certificate = value == "true";
    } else if (key == "tol") {
      spec.tol = to_real(value, key, lineno);
    } else if (key == "output") {
      spec.output = value;
    } else {
      throw ParseError("unknown key '" + key + "'", lineno);
    }
  }
  if (spec.family.empty()) throw ParseError("missing family", lineno);
  const int d = instantiate(spec.family, spec.n_values.empty() ? 16 : spec.n_values.front()).sphere_dim();
  for (double p : p_values) {
    for (double s : s_values) spec.params.push_back(SobolevParams::make(d, p, s));
  }
  spec.validate();
  return spec;
}

}  // namespace sphqmc

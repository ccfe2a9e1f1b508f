#include "sphqmc/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "sphqmc/error.hpp"
#include "sphqmc/fooling.hpp"
#include "sphqmc/geom.hpp"
#include "sphqmc/harness.hpp"
#include "sphqmc/quadrature.hpp"
#include "sphqmc/special.hpp"
#include "sphqmc/wce.hpp"
#include "sphqmc/zonal.hpp"

namespace sphqmc {
namespace {

constexpr double kPi = std::numbers::pi;
// cap radius c N^{-(1-eps)/d} in the depletion construction
constexpr double kCapScale = 2.0;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void append(std::string& s, const std::string& part) {
  if (!s.empty()) s += "; ";
  s += part;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<long> sphere_sizes() { return {128, 256, 512, 1024, 2000}; }

double wce_of(const PointSet& ps, double s) { return wce_p2(ps, s).value; }

// WCE for a family instance, using the exact circle formula where it applies.
double family_wce(const GeneratorSpec& g, const PointSet& ps, double s) {
  if (g.family == Family::equal_spaced_circle) return wce_circle_exact(g.n, 0, s).value;
  if (g.family == Family::circle_removed && g.consecutive) return wce_circle_exact(g.n, g.removed, s).value;
  return wce_of(ps, s);
}

CheckResult circle_exact_vs_brute() {
  CheckResult r;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (long n : {8L, 64L, 256L}) {
    for (double s : {0.75, 1.5}) {
      const double exact = wce_circle_exact(n, 0, s).value;
      const double brute = wce_p2(generate(GeneratorSpec::equal_spaced_circle(n)), s).value;
      worst = std::max(worst, std::fabs(exact - brute));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = worst <= 1e-10 && secs < 10.0;
  r.detail = fmt("max |exact-brute|=%.3e (tol 1e-10), runtime %.2fs (limit 10s)", worst, secs);
  return r;
}

CheckResult circle_design_rate() {
  CheckResult r;
  r.passed = true;
  const auto ns = dyadic_range(16, 4096);
  for (double s : {0.75, 1.5}) {
    std::vector<double> x;
    std::vector<double> y;
    for (long n : ns) {
      x.push_back(static_cast<double>(n));
      y.push_back(wce_circle_exact(n, 0, s).value);
    }
    const auto f = fit_slope(x, y);
    const bool ok = std::fabs(f.slope + s) <= 0.02;
    r.passed = r.passed && ok;
    append(r.detail, fmt("s=%g slope=%.5f target %.2f+-0.02 r2=%.6f", s, f.slope, -s, f.r2));
  }
  return r;
}

CheckResult one_point_removed_strength() {
  CheckResult r;
  r.passed = true;
  const auto ns = dyadic_range(64, 4096);
  const std::pair<double, double> cases[] = {{0.75, -0.75}, {1.5, -1.0}};
  for (auto [s, target] : cases) {
    std::vector<double> x;
    std::vector<double> y;
    for (long n : ns) {
      x.push_back(static_cast<double>(n));
      y.push_back(wce_circle_exact(n, 1, s).value);
    }
    const auto f = fit_slope(x, y);
    const bool ok = std::fabs(f.slope - target) <= 0.05;
    r.passed = r.passed && ok;
    append(r.detail, fmt("s=%g slope=%.5f target %.2f+-0.05", s, f.slope, target));
  }
  const double pref = wce_circle_exact(4096, 1, 0.75).value * std::pow(4096.0, 0.75);
  const double target = std::sqrt(2.0 * zeta(1.5));
  const double rel = std::fabs(pref / target - 1.0);
  r.passed = r.passed && rel <= 0.02;
  append(r.detail, fmt("prefactor at N=4096 %.6f vs sqrt(2 zeta(1.5))=%.6f rel %.4f (tol 0.02)", pref, target, rel));
  return r;
}

CheckResult removed_arc_leading_term() {
  CheckResult r;
  const long n = 4096;
  const double s = 0.75;
  const long m = static_cast<long>(std::ceil(std::pow(static_cast<double>(n), 0.6)));
  const PointSet ps = generate(GeneratorSpec::circle_removed(n, m, true));
  const double rho = covering_radius(ps).radius;
  const double exact = wce_circle_exact(n, m, s).value;
  const double brute = wce_p2(ps, s).value;
  const double lead = std::sqrt(make_zonal_kernel(2.0 * s, 1)->at_angle(0.0)) * rho / kPi;
  const double ratio = exact / lead;
  const double agree = std::fabs(exact - brute) / exact;
  r.passed = ratio >= 0.95 && ratio <= 1.05 && agree <= 1e-8;
  r.detail = fmt("N=%ld M=%ld rho=%.6f wce=%.8e (double sum %.8e, rel diff %.1e) leading=%.8e ratio=%.5f target [0.95,1.05]",
                 n, m, rho, exact, brute, agree, lead, ratio);
  return r;
}

struct FamilyRun {
  std::string family;
  std::vector<long> ns;
  std::vector<double> s_values;
};

CheckResult lower_rate() {
  CheckResult r;
  r.passed = true;
  const std::vector<long> circle_ns = dyadic_range(16, 4096);
  const std::vector<long> random_circle_ns = dyadic_range(16, 2048);
  const std::vector<long> sphere_ns = {64, 128, 256, 512, 1024, 2000};
  const std::vector<FamilyRun> runs = {
      {"circle", circle_ns, {0.75, 1.5}},
      {"circle_removed:m=1", circle_ns, {0.75, 1.5}},
      {"random:seed=7,d=1", random_circle_ns, {0.75, 1.5}},
      {"fibonacci", sphere_ns, {1.5, 2.0}},
      {"equal_area", sphere_ns, {1.5, 2.0}},
      {"random:seed=7,d=2", sphere_ns, {1.5, 2.0}},
  };
  for (const auto& run : runs) {
    std::vector<double> prod;
    for (long n : run.ns) {
      const GeneratorSpec g = instantiate(run.family, n);
      const PointSet ps = generate(g);
      for (double s : run.s_values) {
        const double w = family_wce(g, ps, s);
        prod.push_back(w * std::pow(static_cast<double>(ps.size()), s / ps.dim()));
      }
    }
    const double med = median(prod);
    const double lo = *std::min_element(prod.begin(), prod.end());
    const bool ok = lo >= 0.1 * med;
    r.passed = r.passed && ok;
    append(r.detail, fmt("%s min/median=%.4f", run.family.c_str(), lo / med));
  }
  r.detail += " (need >= 0.1)";
  return r;
}

CheckResult covering_exponent() {
  CheckResult r;
  const double s = 2.0;
  std::vector<double> cov;
  std::vector<double> w;
  for (long n : dyadic_range(16, 4096)) {
    const PointSet ps = generate(GeneratorSpec::equal_spaced_circle(n));
    cov.push_back(covering_radius(ps).radius);
    w.push_back(wce_circle_exact(n, 0, s).value);
  }
  const auto f = fit_slope(w, cov);
  r.passed = std::fabs(f.slope - 0.4) <= 0.05;
  r.detail = fmt("slope of log covering vs log wce = %.5f target 0.40+-0.05 (s=2, p=2, N=16..4096)", f.slope);
  return r;
}

CheckResult certificate_soundness() {
  CheckResult r;
  std::vector<std::string> configs = {
      "fibonacci:n=50", "fibonacci:n=100", "fibonacci:n=400",
      "random:n=50,seed=3,d=2", "random:n=100,seed=4,d=2", "random:n=300,seed=5,d=2",
      "equal_area:n=50", "equal_area:n=100", "equal_area:n=400",
      "circle:n=8", "circle:n=32", "circle:n=256",
      "circle_removed:n=16,m=3", "circle_removed:n=64,m=1", "circle_removed:n=256,mexp=0.6",
  };
  int violations = 0;
  int total = 0;
  double worst = 0.0;
  for (const auto& text : configs) {
    const PointSet ps = generate(GeneratorSpec::parse(text));
    for (double s : {2.0, 4.0}) {
      const auto prm = SobolevParams::make(ps.dim(), 2.0, s);
      const double cert = wce_lower_certificate(ps, prm);
      const double w = wce_p2(ps, s).value;
      ++total;
      if (!(cert <= w)) ++violations;
      worst = std::max(worst, cert / w);
    }
  }
  r.passed = violations == 0;
  r.detail = fmt("%d configurations x s in {2,4}: %d violations, max certificate/wce = %.4e", total / 2,
                 violations, worst);
  return r;
}

CheckResult kernel_semigroup() {
  CheckResult r;
  double worst = 0.0;
  const auto k4 = make_zonal_kernel(KernelSpec::from_tolerance(4.0, 2, 1e-13, KernelEvaluation::truncated_series));
  for (double theta : {0.3, 1.2, 2.8}) {
    const double lhs = sphere_kernel_convolution(2.0, 2.0, theta);
    const double rhs = 1.0 + k4->at_angle(theta);
    worst = std::max(worst, std::fabs(lhs - rhs));
    append(r.detail, fmt("theta=%.1f conv=%.12f K4=%.12f", theta, lhs, rhs));
  }
  r.passed = worst <= 1e-6;
  r.detail += fmt(" max diff %.2e (tol 1e-6)", worst);
  return r;
}

CheckResult filter_partition() {
  CheckResult r;
  const Filter h = make_filter();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> dist(1.0, 1e4);
  double worst_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng);
    double sum = 0.0;
    for (int m = 0; m <= 40; ++m) sum += h.h(std::ldexp(x, -m));
    worst_sum = std::max(worst_sum, std::fabs(sum - 1.0));
  }
  double worst_pair = 0.0;
  constexpr int kGrid = 100000;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = 0.5 + 0.5 * i / kGrid;
    worst_pair = std::max(worst_pair, std::fabs(h.h(t) + h.h(2.0 * t) - 1.0));
  }
  r.passed = worst_sum <= 1e-12 && worst_pair <= 1e-12;
  r.detail = fmt("max |sum_m h(x/2^m)-1|=%.2e over 1000 x, max |h(t)+h(2t)-1|=%.2e on %d points (tol 1e-12)",
                 worst_sum, worst_pair, kGrid + 1);
  return r;
}

CheckResult q_monotonicity() {
  CheckResult r;
  r.passed = true;
  const std::vector<std::string> configs = {
      "circle:n=16", "circle_removed:n=32,m=1", "circle_removed:n=40,m=8,consecutive=0",
      "random:n=20,seed=11,d=1", "random:n=40,seed=12,d=1",
      "fibonacci:n=30", "equal_area:n=40", "random:n=30,seed=13,d=2",
      "cap_depleted:base=fibonacci,n=60,radius=0.5,center=0/0/1", "fibonacci:n=50",
  };
  int bad_order = 0;
  double worst_agree = 0.0;
  for (const auto& text : configs) {
    const PointSet ps = generate(GeneratorSpec::parse(text));
    const int d = ps.dim();
    const double s = d == 1 ? 1.5 : 2.5;
    QuadratureSpec loose;
    loose.rel_tol = d == 1 ? 1e-8 : 1e-4;
    loose.strict = false;
    QuadratureSpec tight;
    tight.rel_tol = 1e-10;
    tight.strict = false;
    const double v1 = wce_lq(ps, SobolevParams::make(d, kInf, s), {}, loose).value;
    const double v2 = wce_lq(ps, SobolevParams::make(d, 2.0, s), {}, tight).value;
    const double vinf = wce_lq(ps, SobolevParams::make(d, 1.0, s), {}, loose).value;
    const double p2 = wce_p2(ps, s).value;
    const double agree = std::fabs(v2 - p2) / (1.0 + p2);
    worst_agree = std::max(worst_agree, agree);
    const bool ordered = v1 <= v2 && v2 <= vinf;
    if (!ordered) ++bad_order;
    append(r.detail, fmt("%s: %.6g<=%.6g<=%.6g%s", text.c_str(), v1, v2, vinf, ordered ? "" : " VIOLATED"));
  }
  r.passed = bad_order == 0 && worst_agree <= 1e-6;
  r.detail += fmt("; max |lq(q=2)-p2|/(1+v)=%.2e (tol 1e-6)", worst_agree);
  return r;
}

CheckResult cap_depletion() {
  CheckResult r;
  const double s = 1.5;
  const int d = 2;
  const double eps = 1.0 - s / d;
  const std::string family = fmt("cap_depleted:base=fibonacci,rscale=%.17g,rexp=%.17g,center=0/0/1", kCapScale, (1.0 - eps) / d);
  std::vector<double> x;
  std::vector<double> cov;
  std::vector<double> w;
  for (long n : sphere_sizes()) {
    const PointSet ps = generate(instantiate(family, n));
    x.push_back(static_cast<double>(n));
    cov.push_back(covering_radius(ps).radius);
    w.push_back(wce_of(ps, s));
  }
  const auto fc = fit_slope(x, cov);
  const auto fw = fit_slope(x, w);
  const double tc = -s / (d * d);
  const double tw = -s / d;
  r.passed = std::fabs(fc.slope - tc) <= 0.08 && std::fabs(fw.slope - tw) <= 0.08;
  r.detail = fmt("eps=%.3f c=%g covering slope %.4f target %.3f+-0.08; wce slope %.4f target %.3f+-0.08", eps, kCapScale,
                 fc.slope, tc, fw.slope, tw);
  return r;
}

// max_n rho_n n^{1/(qs+d)} / wce^{1/(s+d/q)} over the greedy packing.
double packing_ratio(const PointSet& ps, double w, double s, double q) {
  const int d = ps.dim();
  const auto holes = ordered_avoiding_packing(ps, 32);
  double best = 0.0;
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    best = std::max(best, holes[i].radius * std::pow(n, 1.0 / (q * s + d)));
  }
  return best / std::pow(w, 1.0 / (s + d / q));
}

CheckResult packing_bound() {
  CheckResult r;
  const double s = 1.5;
  const double q = 2.0;
  double fitted = 0.0;
  for (long n : dyadic_range(64, 4096)) {
    for (const std::string family : {"circle", "circle_removed:mexp=0.6"}) {
      const GeneratorSpec g = instantiate(family, n);
      const PointSet ps = generate(g);
      fitted = std::max(fitted, packing_ratio(ps, family_wce(g, ps, s), s, q));
    }
  }
  double worst = 0.0;
  std::string worst_at;
  for (const std::string family :
       {"fibonacci", "equal_area", "random:seed=21,d=2", "cap_depleted:base=fibonacci,rscale=2,rexp=0.375,center=0/0/1"}) {
    for (long n : sphere_sizes()) {
      const PointSet ps = generate(instantiate(family, n));
      const double ratio = packing_ratio(ps, wce_of(ps, s), s, q);
      if (ratio > worst) {
        worst = ratio;
        worst_at = family + " N=" + std::to_string(n);
      }
    }
  }
  r.passed = worst <= 2.0 * fitted;
  r.detail = fmt("C' fitted on circle data %.5f; max S^2 ratio %.5f at %s; ratio/C' = %.4f (limit 2)", fitted,
                 worst, worst_at.c_str(), worst / fitted);
  return r;
}

const std::map<std::string, std::function<CheckResult()>, std::less<>>& registry() {
  static const std::map<std::string, std::function<CheckResult()>, std::less<>> m = {
      {"circle-exact-vs-brute", circle_exact_vs_brute},
      {"circle-design-rate", circle_design_rate},
      {"one-point-removed-strength", one_point_removed_strength},
      {"removed-arc-leading-term", removed_arc_leading_term},
      {"lower-rate", lower_rate},
      {"covering-exponent", covering_exponent},
      {"certificate-soundness", certificate_soundness},
      {"kernel-semigroup", kernel_semigroup},
      {"filter-partition", filter_partition},
      {"q-monotonicity", q_monotonicity},
      {"cap-depletion", cap_depletion},
      {"packing-bound", packing_bound},
  };
  return m;
}

}  // namespace

bool VerifyReport::passed() const {
  if (incomplete) return false;
  return std::all_of(results.begin(), results.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "circle-exact-vs-brute", "circle-design-rate", "one-point-removed-strength", "removed-arc-leading-term",
      "lower-rate", "covering-exponent", "certificate-soundness", "kernel-semigroup",
      "filter-partition", "q-monotonicity", "cap-depletion", "packing-bound",
  };
  return names;
}

CheckResult run_check(std::string_view name) {
  const auto& reg = registry();
  const auto it = reg.find(name);
  if (it == reg.end()) throw InvalidArgument("unknown check '" + std::string(name) + "'");
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = it->second();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.name = std::string(name);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

VerifyReport verify_theorems(const std::vector<std::string>& which, double budget_seconds) {
  const std::vector<std::string>& names = which.empty() ? check_names() : which;
  for (const auto& n : names) {
    if (registry().find(n) == registry().end()) throw InvalidArgument("unknown check '" + n + "'");
  }
  VerifyReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& n : names) {
    const double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (used > budget_seconds) {
      CheckResult skipped;
      skipped.name = n;
      skipped.skipped = true;
      skipped.detail = "time budget exhausted";
      rep.results.push_back(skipped);
      rep.incomplete = true;
      continue;
    }
    rep.results.push_back(run_check(n));
  }
  return rep;
}

CsvTable covering_bound_table(const std::string& family, const std::vector<long>& n_values,
                              const SobolevParams& params) {
  CsvTable t({"N", "rho", "wce", "certificate", "ratio"});
  for (long n : n_values) {
    const GeneratorSpec g = instantiate(family, n);
    const PointSet ps = generate(g);
    const SobolevParams prm = SobolevParams::make(ps.dim(), params.p, params.s);
    const Certificate c = collar_certificate(ps, prm);
    const double w = prm.p == 2.0 ? family_wce(g, ps, prm.s) : wce_lq(ps, prm).value;
    t.add_row({std::to_string(ps.size()), format_double(covering_radius(ps).radius), format_double(w),
               format_double(c.value), format_double(c.value / w)});
  }
  return t;
}

double sphere_kernel_convolution(double a, double b, double theta, double rel_tol) {
  if (!(theta > 0.0 && theta < kPi)) throw InvalidArgument("convolution angle must lie in (0, pi)");
  const auto ka = make_zonal_kernel(a, 2);
  const auto kb = make_zonal_kernel(b, 2);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  // x = north pole, y in the xz-plane; by reflection symmetry both Voronoi halves reduce
  // to the half around x with the two factors swapped.
  auto cell = [&](std::size_t na, std::size_t nr) {
    const GaussRule& gr = gauss_legendre(nr);
    double total = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
      const double alpha = 2.0 * kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(na);
      const double ca = std::cos(alpha);
      const double R = std::atan2(1.0 - ct, st * ca);
      double inner = 0.0;
      for (std::size_t k = 0; k < nr; ++k) {
        const double u = 0.5 * (gr.nodes[k] + 1.0);
        // cubic grading toward the pole, where the factor has a log singularity
        const double rr = R * u * u * u;
        const double jac = 3.0 * R * u * u;
        const double z[3] = {std::sin(rr) * ca, std::sin(rr) * std::sin(alpha), std::cos(rr)};
        const double y[3] = {st, 0.0, ct};
        double dm = 0.0;
        double dp = 0.0;
        for (int c = 0; c < 3; ++c) {
          dm += (z[c] - y[c]) * (z[c] - y[c]);
          dp += (z[c] + y[c]) * (z[c] + y[c]);
        }
        const double psi = 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
        const double f = (1.0 + ka->at_angle(rr)) * (1.0 + kb->at_angle(psi)) +
                         (1.0 + kb->at_angle(rr)) * (1.0 + ka->at_angle(psi));
        inner += 0.5 * gr.weights[k] * jac * std::sin(rr) * f;
      }
      total += inner;
    }
    return total * (2.0 * kPi / static_cast<double>(na)) / (4.0 * kPi);
  };
  std::size_t na = 32;
  std::size_t nr = 16;
  double prev = cell(na, nr);
  for (int it = 0; it < 8; ++it) {
    na *= 2;
    nr *= 2;
    const double cur = cell(na, nr);
    if (std::fabs(cur - prev) <= rel_tol * std::fabs(cur)) return cur;
    prev = cur;
  }
  throw ConvergenceError("sphere_kernel_convolution did not converge");
}

}  // namespace sphqmc

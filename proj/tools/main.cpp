#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>

#include "sphqmc/checks.hpp"
#include "sphqmc/csv.hpp"
#include "sphqmc/error.hpp"
#include "sphqmc/geom.hpp"
#include "sphqmc/harness.hpp"
#include "sphqmc/parallel.hpp"
#include "sphqmc/pointset.hpp"
#include "sphqmc/wce.hpp"

using namespace sphqmc;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double tol = 1e-10;
  std::string out;
};

struct Source {
  std::string points;
  std::string family;

  void add(CLI::App* cmd) {
    auto* p = cmd->add_option("--points", points, "Point file (one unit vector per line)");
    auto* f = cmd->add_option("--family", family, "Generator spec, e.g. fibonacci:n=100");
    p->excludes(f);
  }

  PointSet load_points(const Globals& g) const {
    if (!points.empty()) return load(points);
    if (family.empty()) throw InvalidArgument("one of --points or --family is required");
    GeneratorSpec spec = GeneratorSpec::parse(family);
    if (spec.family == Family::random_uniform && family.find("seed=") == std::string::npos) spec.seed = g.seed;
    return generate(spec);
  }
};

std::vector<long> parse_counts(const std::string& text) {
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    return dyadic_range(std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2)));
  }
  std::vector<long> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(std::stol(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma - start);
    out.push_back(item == "inf" ? kInf : std::stod(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_p(const std::string& text) { return text == "inf" ? kInf : std::stod(text); }

std::string param_text(double v) { return std::isinf(v) ? "inf" : format_double(v); }

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality measures and worst-case cubature errors for point sets on S^1 and S^2"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for random families without an explicit seed=");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");
  app.add_option("--tol", g.tol, "Kernel tail tolerance");
  app.add_option("--out", g.out, "Write output to FILE instead of stdout");

  int exit_code = 0;

  auto* gen = app.add_subcommand("generate", "Generate a point set");
  std::string gen_family;
  gen->add_option("--family", gen_family, "Generator spec")->required();

  auto* met = app.add_subcommand("metrics", "Covering radius, separation and mesh ratio");
  Source met_src;
  met_src.add(met);
  double grid_res = 1e-3;
  met->add_option("--grid", grid_res, "Grid resolution for the estimator (d >= 3)");

  auto* wce = app.add_subcommand("wce", "Worst-case error in W_p^s");
  Source wce_src;
  wce_src.add(wce);
  int wce_d = 0;
  std::string wce_p = "2";
  double wce_s = 1.5;
  std::string wce_method = "auto";
  double wce_quad_tol = QuadratureSpec{}.rel_tol;
  wce->add_option("--d", wce_d, "Sphere dimension (checked against the points)");
  wce->add_option("--p", wce_p, "Integrability exponent p in [1, inf]");
  wce->add_option("--s", wce_s, "Smoothness s > d/p");
  wce->add_option("--method", wce_method, "auto|p2|exact|lq")->check(CLI::IsMember({"auto", "p2", "exact", "lq"}));
  wce->add_option("--quad-tol", wce_quad_tol, "Relative tolerance of the lq quadrature")->check(CLI::PositiveNumber);

  auto* hol = app.add_subcommand("holes", "Greedy ordered packing of empty caps");
  Source hol_src;
  hol_src.add(hol);
  std::size_t max_holes = 16;
  hol->add_option("--max", max_holes, "Maximum number of holes");

  auto* swp = app.add_subcommand("sweep", "Family sweep to CSV");
  std::string swp_config;
  std::string swp_family;
  std::string swp_n = "16..4096";
  std::string swp_s = "1.5";
  std::string swp_p = "2";
  bool swp_cert = false;
  std::string swp_fit;
  swp->add_option("--config", swp_config, "key=value sweep definition");
  swp->add_option("--family", swp_family, "Family without n=, e.g. circle_removed:m=1");
  swp->add_option("--n", swp_n, "Counts: list a,b,c or dyadic range lo..hi");
  swp->add_option("--s", swp_s, "Comma-separated smoothness values");
  swp->add_option("--p", swp_p, "Comma-separated p values");
  swp->add_flag("--certificate", swp_cert, "Add fooling certificates (s in {2,4})");
  swp->add_option("--fit", swp_fit, "Print the log-log slope of this column against N to stderr");

  auto* ver = app.add_subcommand("verify", "Run acceptance checks");
  std::vector<std::string> ver_checks;
  double budget = 1e9;
  std::string ver_family = "circle";
  std::string ver_n = "16..4096";
  double ver_s = 2.0;
  std::string ver_p = "2";
  ver->add_option("--check", ver_checks, "Check names, 'all', or covering-bound");
  ver->add_option("--budget", budget, "Time budget in seconds");
  ver->add_option("--family", ver_family, "covering-bound: family without n=");
  ver->add_option("--n", ver_n, "covering-bound: counts");
  ver->add_option("--s", ver_s, "covering-bound: s in {2,4}");
  ver->add_option("--p", ver_p, "covering-bound: p");
  ver->add_flag_callback("--list", [] {
    for (const auto& n : check_names()) std::cout << n << '\n';
    std::cout << "covering-bound\n";
    std::exit(0);
  }, "List check names");

  auto* cir = app.add_subcommand("circle", "Exact WCE of roots of unity with M consecutive points removed");
  long cir_n = 64;
  long cir_m = 0;
  double cir_s = 1.5;
  cir->add_option("--n", cir_n, "N")->required();
  cir->add_option("--m", cir_m, "Removed points M");
  cir->add_option("--s", cir_s, "Smoothness s > 1/2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    set_thread_count(g.threads);
    Output out(g.out);
    std::ostream& os = out.stream();
    if (*gen) {
      GeneratorSpec spec = GeneratorSpec::parse(gen_family);
      if (spec.family == Family::random_uniform && gen_family.find("seed=") == std::string::npos) spec.seed = g.seed;
      write_points(os, generate(spec));
    } else if (*met) {
      const PointSet ps = met_src.load_points(g);
      CsvTable t({"N", "d", "covering", "separation", "mesh_ratio", "method"});
      const QualityReport q = mesh_ratio(ps, grid_res);
      t.add_row({std::to_string(ps.size()), std::to_string(ps.dim()), format_double(q.covering),
                 format_double(q.separation), format_double(q.mesh_ratio), to_string(q.method)});
      t.write(os);
    } else if (*wce) {
      const PointSet ps = wce_src.load_points(g);
      if (wce_d != 0 && wce_d != ps.dim()) throw InvalidArgument("--d does not match the points");
      const SobolevParams prm = SobolevParams::make(ps.dim(), parse_p(wce_p), wce_s);
      const KernelSpec ks = KernelSpec::from_tolerance(prm.s, ps.dim(), g.tol);
      WceResult r;
      std::string method = wce_method;
      if (method == "auto") method = prm.p == 2.0 ? "p2" : "lq";
      if (method == "p2") {
        if (prm.p != 2.0) throw InvalidArgument("method p2 requires p = 2");
        r = wce_p2(ps, prm.s, ks);
      } else if (method == "exact") {
        const GeneratorSpec spec = wce_src.family.empty() ? GeneratorSpec{} : GeneratorSpec::parse(wce_src.family);
        if (wce_src.family.empty() || prm.p != 2.0 ||
            !(spec.family == Family::equal_spaced_circle ||
              (spec.family == Family::circle_removed && spec.consecutive))) {
          throw InvalidArgument("method exact needs p = 2 and a circle or consecutive circle_removed family");
        }
        r = wce_circle_exact(spec.n, spec.family == Family::circle_removed ? spec.removed : 0, prm.s);
      } else {
        QuadratureSpec quad;
        quad.rel_tol = wce_quad_tol;
        r = wce_lq(ps, prm, ks, quad);
      }
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
      CsvTable t({"N", "d", "p", "s", "value", "err_estimate", "method"});
      t.add_row({std::to_string(ps.size()), std::to_string(ps.dim()), param_text(prm.p), format_double(prm.s),
                 format_double(r.value), format_double(r.err_estimate), to_string(r.method)});
      t.write(os);
    } else if (*hol) {
      const PointSet ps = hol_src.load_points(g);
      CsvTable t({"index", "radius", "cx", "cy", "cz"});
      const auto holes = ordered_avoiding_packing(ps, max_holes);
      for (std::size_t i = 0; i < holes.size(); ++i) {
        const auto& c = holes[i].center;
        t.add_row({std::to_string(i + 1), format_double(holes[i].radius), format_double(c[0]),
                   format_double(c[1]), c.size() > 2 ? format_double(c[2]) : std::string("0")});
      }
      t.write(os);
    } else if (*swp) {
      SweepSpec spec;
      if (!swp_config.empty()) {
        std::ifstream in(swp_config);
        if (!in) throw IoError("cannot open " + swp_config);
        spec = parse_sweep_config(in);
      } else {
        if (swp_family.empty()) throw InvalidArgument("sweep needs --config or --family");
        spec.family = swp_family;
        spec.n_values = parse_counts(swp_n);
        spec.certificate = swp_cert;
        const int d = instantiate(spec.family, spec.n_values.back()).sphere_dim();
        for (double p : parse_reals(swp_p)) {
          for (double s : parse_reals(swp_s)) spec.params.push_back(SobolevParams::make(d, p, s));
        }
      }
      spec.tol = g.tol;
      const CsvTable t = run_sweep(spec);
      if (!spec.output.empty() && g.out.empty()) {
        std::ofstream f(spec.output);
        if (!f) throw IoError("cannot open " + spec.output);
        t.write(f);
      } else {
        t.write(os);
      }
      if (!swp_fit.empty()) {
        const auto f = fit_slope(t, "N", swp_fit);
        std::cerr << "slope=" << f.slope << " intercept=" << f.intercept << " r2=" << f.r2 << '\n';
      }
      for (const auto& row : t.rows()) {
        if (!row.back().empty()) exit_code = 1;
      }
    } else if (*ver) {
      bool covering = false;
      std::vector<std::string> names;
      for (const auto& c : ver_checks) {
        if (c == "covering-bound") {
          covering = true;
        } else if (c != "all") {
          names.push_back(c);
        }
      }
      if (covering) {
        const int d = instantiate(ver_family, 16).sphere_dim();
        covering_bound_table(ver_family, parse_counts(ver_n), SobolevParams::make(d, parse_p(ver_p), ver_s)).write(os);
      }
      if (!covering || !names.empty()) {
        const VerifyReport rep = verify_theorems(names, budget);
        for (const auto& r : rep.results) {
          os << (r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL") << ' ' << r.name << " (" << r.seconds << "s): "
             << r.detail << '\n';
        }
        if (rep.incomplete) os << "report incomplete: time budget exhausted\n";
        exit_code = rep.passed() ? 0 : 1;
      }
    } else if (*cir) {
      const WceResult r = wce_circle_exact(cir_n, cir_m, cir_s);
      CsvTable t({"N", "M", "s", "covering", "value", "err_estimate"});
      const double cov = std::numbers::pi * static_cast<double>(cir_m + 1) / static_cast<double>(cir_n);
      t.add_row({std::to_string(cir_n), std::to_string(cir_m), format_double(cir_s), format_double(cov),
                 format_double(r.value), format_double(r.err_estimate)});
      t.write(os);
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}

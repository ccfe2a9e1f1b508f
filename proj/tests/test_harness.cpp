#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "sphqmc/checks.hpp"
#include "sphqmc/csv.hpp"
#include "sphqmc/error.hpp"
#include "sphqmc/harness.hpp"
#include "sphqmc/kernel.hpp"

using namespace sphqmc;
using doctest::Approx;

namespace {

std::string random_cell(std::mt19937_64& rng) {
  static const std::string alphabet = "abcXYZ019 ,\"'.-_;:\n";
  std::string s;
  const std::size_t len = rng() % 8;
  for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
  return s;
}

}  // namespace

TEST_CASE("shortest round-trip formatting") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(u(rng), static_cast<int>(rng() % 200) - 100);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("csv tables round-trip through text") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t cols = 1 + rng() % 5;
    std::vector<std::string> header;
    for (std::size_t c = 0; c < cols; ++c) header.push_back("h" + std::to_string(c) + random_cell(rng));
    CsvTable t(header);
    const std::size_t rows = rng() % 6;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> row;
      for (std::size_t c = 0; c < cols; ++c) row.push_back(random_cell(rng));
      t.add_row(row);
    }
    std::stringstream io;
    t.write(io);
    const CsvTable back = CsvTable::read(io);
    CHECK(back.header() == t.header());
    CHECK(back.rows() == t.rows());
  }
}

TEST_CASE("csv columns and errors") {
  CsvTable t({"N", "wce", "label"});
  t.add_row({"4", "0.5", "a"});
  t.add_row({"8", "inf", "b"});
  CHECK(t.column_index("wce") == 1);
  const auto w = t.column("wce");
  CHECK(w[0] == 0.5);
  CHECK(std::isinf(w[1]));
  CHECK_THROWS_AS(t.column("label"), ParseError);
  CHECK_THROWS_AS(t.column("missing"), InvalidArgument);
  CHECK_THROWS_AS(t.add_row({"1"}), InvalidArgument);
  std::istringstream bad("a,b\n1\n");
  CHECK_THROWS_AS(CsvTable::read(bad), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(CsvTable::read(empty), ParseError);
}

TEST_CASE("slope fits recover power laws") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng);
    const double c = std::exp(u(rng));
    std::vector<double> x;
    std::vector<double> y;
    for (int k = 0; k < 6; ++k) {
      x.push_back(std::ldexp(1.0, 3 + k));
      y.push_back(c * std::pow(x.back(), a));
    }
    const SlopeFit f = fit_slope(x, y);
    CHECK(f.slope == Approx(a).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == Approx(c).epsilon(1e-10));
    CHECK(f.r2 == Approx(1.0).epsilon(1e-12));
  }
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(fit_slope(three, three), InvalidArgument);
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> neg{1, -2, 3, 4};
  CHECK_THROWS_AS(fit_slope(x, neg), InvalidArgument);
}

TEST_CASE("dyadic ranges and family instantiation") {
  CHECK(dyadic_range(16, 128) == std::vector<long>{16, 32, 64, 128});
  CHECK(dyadic_range(3, 20) == std::vector<long>{3, 6, 12});
  CHECK_THROWS_AS(dyadic_range(0, 4), InvalidArgument);
  CHECK(instantiate("circle", 12).n == 12);
  CHECK(instantiate("circle_removed:m=2", 12).removed == 2);
}

TEST_CASE("sweep over equally spaced circles") {
  SweepSpec spec;
  spec.family = "circle";
  spec.n_values = dyadic_range(16, 4096);
  spec.params = {SobolevParams::make(1, 2.0, 1.5)};
  const CsvTable t = run_sweep(spec);
  REQUIRE(t.size() == 9);
  const auto w = t.column("wce");
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] < w[i - 1]);
  const SlopeFit f = fit_slope(t, "N", "wce");
  CHECK(f.slope == Approx(-1.5).epsilon(0.02 / 1.5));
  for (std::size_t r = 0; r < t.size(); ++r) CHECK(t.rows()[r][12].empty());
  const auto mr = t.column("mesh_ratio");
  for (double m : mr) CHECK(m == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sweep over random points on the sphere") {
  SweepSpec spec;
  spec.family = "random:seed=3,d=2";
  spec.n_values = {64, 128, 256, 512, 1024};
  spec.params = {SobolevParams::make(2, 2.0, 1.5)};
  const SlopeFit f = fit_slope(run_sweep(spec), "N", "wce");
  MESSAGE("random sphere slope ", f.slope);
  CHECK(f.slope < -0.45);
}

TEST_CASE("sweeps are deterministic and record certificates") {
  SweepSpec spec;
  spec.family = "fibonacci";
  spec.n_values = {20, 40};
  spec.params = {SobolevParams::make(2, 2.0, 2.0)};
  spec.certificate = true;
  const CsvTable a = run_sweep(spec);
  const CsvTable b = run_sweep(spec);
  CHECK(a.rows() == b.rows());
  const auto cert = a.column("certificate");
  const auto wce = a.column("wce");
  for (std::size_t i = 0; i < cert.size(); ++i) CHECK(cert[i] < wce[i]);
}

TEST_CASE("row errors do not abort the sweep") {
  SweepSpec spec;
  spec.family = "circle_removed:m=5";
  spec.n_values = {4, 16};
  spec.params = {SobolevParams::make(1, 2.0, 1.0)};
  const CsvTable t = run_sweep(spec);
  REQUIRE(t.size() == 2);
  CHECK_FALSE(t.rows()[0][12].empty());
  CHECK(t.rows()[1][12].empty());
}

TEST_CASE("sweep specs are validated") {
  SweepSpec spec;
  spec.family = "circle";
  spec.params = {SobolevParams::make(1, 2.0, 1.0)};
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.n_values = {8, 8};
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.n_values = {8, 16};
  CHECK_NOTHROW(spec.validate());
  spec.params.clear();
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("sweep configuration files") {
  std::istringstream in(
      "# circle sweep\n"
      "family = circle_removed:m=1\n"
      "n = 16..256   # dyadic\n"
      "s = 1.5, 2\n"
      "p = 2, inf\n"
      "certificate = true\n"
      "tol = 1e-9\n"
      "output = out.csv\n");
  const SweepSpec spec = parse_sweep_config(in);
  CHECK(spec.family == "circle_removed:m=1");
  CHECK(spec.n_values == std::vector<long>{16, 32, 64, 128, 256});
  REQUIRE(spec.params.size() == 4);
  CHECK(spec.params[0].d == 1);
  CHECK(std::isinf(spec.params[3].p));
  CHECK(spec.params[3].s == 2.0);
  CHECK(spec.certificate);
  CHECK(spec.tol == 1e-9);
  CHECK(spec.output == "out.csv");

  std::istringstream list("family=fibonacci\nn=10,20,40,80\ns=2\n");
  CHECK(parse_sweep_config(list).n_values == std::vector<long>{10, 20, 40, 80});

  for (const char* bad : {"family=circle\nn=8,16\ns=1\nbogus=1\n", "n=8,16\ns=1\n", "family=circle\nn=8\ns=abc\n",
                          "family=circle\nn=8,16\ns=1\ncertificate=yes\n", "family=circle\njunk\n"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(parse_sweep_config(b), ParseError);
  }
  std::istringstream weak("family=fibonacci\nn=8,16\ns=0.5\n");
  CHECK_THROWS_AS(parse_sweep_config(weak), InvalidArgument);
}

TEST_CASE("check registry") {
  CHECK(check_names().size() == 12);
  CHECK_THROWS_AS(run_check("no-such-check"), InvalidArgument);
  CHECK_THROWS_AS(verify_theorems({"no-such-check"}), InvalidArgument);
  const auto report = verify_theorems({"filter-partition"}, -1.0);
  CHECK(report.incomplete);
  CHECK(report.results.at(0).skipped);
  const auto ok = verify_theorems({"filter-partition"});
  CHECK(ok.passed());
}

TEST_CASE("covering bound table") {
  const CsvTable t = covering_bound_table("circle", {16, 32, 64}, SobolevParams::make(1, 2.0, 2.0));
  REQUIRE(t.size() == 3);
  const auto ratio = t.column("ratio");
  const auto cert = t.column("certificate");
  const auto wce = t.column("wce");
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    CHECK(ratio[i] == Approx(cert[i] / wce[i]).epsilon(1e-12));
    CHECK(ratio[i] < 1.0);
  }
}

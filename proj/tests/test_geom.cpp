#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sphqmc/error.hpp"
#include "sphqmc/geom.hpp"
#include "sphqmc/pointset.hpp"

using namespace sphqmc;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

void check_packing(const PointSet& ps, const std::vector<Hole>& holes) {
  for (std::size_t i = 0; i < holes.size(); ++i) {
    CHECK(oracle::nearest(ps, holes[i].center) >= holes[i].radius - 1e-9);
    if (i > 0) CHECK(holes[i].radius <= holes[i - 1].radius + 1e-15);
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(oracle::angle(holes[i].center, holes[j].center) > holes[i].radius + holes[j].radius - 1e-12);
    }
  }
}

}  // namespace

TEST_CASE("circle covering, separation and mesh ratio") {
  const PointSet square = generate(GeneratorSpec::equal_spaced_circle(4));
  const auto cov = covering_radius(square);
  CHECK(cov.radius == Approx(kPi / 4).epsilon(1e-15));
  CHECK(cov.method == CoveringMethod::exact_circle);
  CHECK(oracle::nearest(square, cov.hole.center) == Approx(kPi / 4).epsilon(1e-12));
  const auto q = mesh_ratio(generate(GeneratorSpec::equal_spaced_circle(50)));
  CHECK(q.mesh_ratio == Approx(0.5).epsilon(1e-13));
  CHECK(q.mesh_ratio == q.covering / q.separation);
}

TEST_CASE("removing M consecutive roots opens a hole of radius pi (M + 1) / N") {
  for (long n : {16L, 64L, 1000L}) {
    for (long m : {1L, 3L, 7L}) {
      const PointSet ps = generate(GeneratorSpec::circle_removed(n, m));
      CHECK(std::fabs(covering_radius(ps).radius - kPi * (m + 1) / n) <= 1e-12);
    }
  }
  const auto q = mesh_ratio(generate(GeneratorSpec::circle_removed(64, 1)));
  CHECK(q.mesh_ratio == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tetrahedron against brute-force oracles") {
  const PointSet t = oracle::tetrahedron();
  const double sep = oracle::separation(t);
  CHECK(sep == Approx(std::acos(-1.0 / 3.0)).epsilon(1e-12));
  CHECK(separation(t) == Approx(sep).epsilon(1e-14));
  const double grid = oracle::covering_by_grid(t, 40000);
  const auto cov = covering_radius(t);
  CHECK(cov.method == CoveringMethod::hull_facets);
  CHECK(cov.radius == Approx(grid).epsilon(1e-8));
  CHECK(cov.radius == Approx(1.230959417340775).epsilon(1e-12));
  CHECK(mesh_ratio(t).mesh_ratio == Approx(grid / sep).epsilon(1e-8));
  CHECK(mesh_ratio(t).mesh_ratio == Approx(0.64427).epsilon(1e-5));
}

TEST_CASE("octahedron covering") {
  CHECK(covering_radius(oracle::octahedron()).radius == Approx(std::acos(1.0 / std::sqrt(3.0))).epsilon(1e-12));
}

TEST_CASE("grid estimator") {
  const PointSet square = generate(GeneratorSpec::equal_spaced_circle(4));
  CHECK(std::fabs(grid_covering_estimate(square, 1e-4) - kPi / 4) <= 1e-4);
  const PointSet t = oracle::tetrahedron();
  const double coarse = grid_covering_estimate(t, 1e-2);
  const double fine = grid_covering_estimate(t, 1e-3);
  CHECK(std::fabs(fine - 1.2310) <= 1e-3);
  CHECK(std::fabs(coarse - fine) <= 1e-2);
  const PointSet one(2, {0, 0, 1});
  CHECK(std::fabs(grid_covering_estimate(one, 1e-3) - kPi) <= 1e-3);
  CHECK(covering_radius(one).radius == Approx(kPi).epsilon(1e-9));
  CHECK_THROWS_AS(grid_covering_estimate(square, 0.0), InvalidArgument);
}

TEST_CASE("points on a great circle leave the poles uncovered") {
  const PointSet equator = generate(GeneratorSpec::equal_spaced_circle(6));
  std::vector<double> c;
  for (std::size_t i = 0; i < equator.size(); ++i) {
    c.push_back(equator.point(i)[0]);
    c.push_back(equator.point(i)[1]);
    c.push_back(0.0);
  }
  const auto cov = covering_radius(PointSet(2, c));
  CHECK(cov.radius == Approx(kPi / 2).epsilon(1e-12));
  CHECK(std::fabs(std::fabs(cov.hole.center[2]) - 1.0) <= 1e-12);
}

TEST_CASE("separation requires two points") {
  CHECK_THROWS_AS(separation(PointSet(2, {0, 0, 1})), InvalidArgument);
}

TEST_CASE("exact covering matches a brute-force grid search over random seeds") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PointSet s1 = oracle::random_points(1, 12, seed);
    CHECK(covering_radius(s1).radius == Approx(oracle::covering_by_grid(s1, 4000)).epsilon(1e-9));
    const PointSet s2 = oracle::random_points(2, 30, 1000 + seed);
    const auto exact = covering_radius(s2);
    const double grid = grid_covering_estimate(s2, 1e-2);
    CHECK(grid <= exact.radius + 1e-12);
    CHECK(exact.radius - grid <= 1e-2);
    CHECK(exact.radius == Approx(oracle::covering_by_grid(s2, 20000)).epsilon(1e-9));
    CHECK(oracle::separation(s2) == Approx(separation(s2)).epsilon(1e-13));
  }
}

TEST_CASE("exact and grid covering agree on every generated family") {
  for (const char* f : {"fibonacci:n=200", "equal_area:n=150", "random:n=100,seed=3,d=2",
                        "cap_depleted:n=300,base=fibonacci,radius=0.5,center=0/0/1", "circle:n=33",
                        "circle_removed:n=40,m=2", "random:n=17,seed=8,d=1"}) {
    const PointSet ps = generate(GeneratorSpec::parse(f));
    const double exact = covering_radius(ps).radius;
    const double grid = grid_covering_estimate(ps, 5e-3);
    CHECK_MESSAGE(std::fabs(exact - grid) <= 5e-3, f);
  }
}

TEST_CASE("covering and separation are rotation invariant") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PointSet ps = oracle::random_points(2, 40, seed);
    const auto rot = random_rotation(3, 77 + seed);
    const PointSet moved = transformed(ps, rot);
    CHECK(std::fabs(covering_radius(ps).radius - covering_radius(moved).radius) <= 1e-9);
    CHECK(std::fabs(separation(ps) - separation(moved)) <= 1e-9);
    const PointSet c = oracle::random_points(1, 15, seed);
    const PointSet cm = transformed(c, random_rotation(2, seed));
    CHECK(std::fabs(covering_radius(c).radius - covering_radius(cm).radius) <= 1e-9);
  }
}

TEST_CASE("random rotations are orthogonal") {
  const auto r = random_rotation(3, 5);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += r[i * 3 + k] * r[j * 3 + k];
      CHECK(s == Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("maximal holes are empty and touch the point set") {
  const PointSet ps = generate(GeneratorSpec::fibonacci_s2(80));
  for (const Hole& h : maximal_holes(ps)) {
    CHECK(oracle::nearest(ps, h.center) == Approx(h.radius).epsilon(1e-9));
  }
}

TEST_CASE("ordered avoiding packings") {
  SUBCASE("equally spaced circle") {
    const PointSet ps = generate(GeneratorSpec::equal_spaced_circle(10));
    const auto holes = ordered_avoiding_packing(ps, 3);
    CHECK(holes.size() == 3);
    for (const Hole& h : holes) CHECK(h.radius == Approx(kPi / 10).epsilon(1e-12));
    check_packing(ps, holes);
    CHECK(ordered_avoiding_packing(ps, 100).size() == 5);
  }
  SUBCASE("removed roots") {
    const PointSet ps = generate(GeneratorSpec::circle_removed(32, 3));
    const auto holes = ordered_avoiding_packing(ps, 6);
    REQUIRE(holes.size() == 6);
    CHECK(holes[0].radius == Approx(4 * kPi / 32).epsilon(1e-12));
    for (std::size_t i = 1; i < holes.size(); ++i) CHECK(holes[i].radius == Approx(kPi / 32).epsilon(1e-12));
    check_packing(ps, holes);
  }
  SUBCASE("tetrahedron facet holes touch each other") {
    const PointSet t = oracle::tetrahedron();
    const auto all = maximal_holes(t);
    CHECK(all.size() == 4);
    for (const Hole& h : all) CHECK(h.radius == Approx(std::acos(1.0 / 3.0)).epsilon(1e-12));
    const auto holes = ordered_avoiding_packing(t, 4);
    REQUIRE(!holes.empty());
    check_packing(t, holes);
  }
  SUBCASE("random sets, both dimensions") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const PointSet s2 = oracle::random_points(2, 60, seed);
      check_packing(s2, ordered_avoiding_packing(s2, 25));
      const PointSet s1 = oracle::random_points(1, 25, seed);
      check_packing(s1, ordered_avoiding_packing(s1, 25));
    }
  }
  SUBCASE("unsupported dimension") {
    CHECK_THROWS_AS(ordered_avoiding_packing(oracle::random_points(3, 10, 1), 3), InvalidArgument);
  }
}

TEST_CASE("nearest-point index agrees with a linear scan") {
  std::mt19937_64 rng(4);
  for (int d : {1, 2}) {
    const PointSet ps = oracle::random_points(d, 500, 11 + d);
    const NearestPoint idx(ps);
    const PointSet ys = oracle::random_points(d, 200, 99);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      CHECK(idx.distance(ys.point(i)) == Approx(oracle::nearest(ps, ys.point(i))).epsilon(1e-12));
    }
  }
}

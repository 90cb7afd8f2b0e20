#include "doctest.h"

#include <cmath>

#include "core/sampling.hpp"
#include "core/solvers.hpp"
#include "oracles.hpp"

using namespace pwe;

namespace {

PointSet make_points(std::initializer_list<Point> pts) {
  PointSet ps(static_cast<int>(pts.begin()->size()));
  for (const Point& x : pts) ps.push(x);
  return ps;
}

Instance make_instance(PointSet ps, double p, Functional f,
                       Variant v = Variant::Plain, Mode m = Mode::Exact) {
  Instance inst;
  inst.box = unit_box(ps.dim);
  inst.points = std::move(ps);
  inst.p = p;
  inst.functional = f;
  inst.variant = v;
  inst.mode = m;
  return inst;
}

}  // namespace

TEST_CASE("spanning tree frozen values") {
  const Box box = unit_box(2);
  CHECK(solve_mst(make_points({{0.0, 0.0}, {0.0, 1.0}}), box, 1.0).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(solve_mst(make_points({{0.0, 0.0}, {0.0, 0.5}, {0.0, 1.0}}), box, 2.0).value ==
        doctest::Approx(0.5).epsilon(1e-12));
  PointSet empty(2);
  CHECK(solve_mst(empty, box, 1.0).value == 0.0);
  CHECK(solve_mst(make_points({{0.4, 0.4}}), box, 1.0).value == 0.0);
}

TEST_CASE("spanning tree matches tree enumeration") {
  const Box box = unit_box(2);
  Rng rng = make_stream(SeedSpec{31}, 7, 0);
  for (int c = 0; c < 30; ++c) {
    const PointSet ps = sample_uniform(rng, 7, 2);
    const Solution got = solve_mst(ps, box, 1.7);
    CHECK(got.value == doctest::Approx(oracle::mst_value(ps, 1.7)).epsilon(1e-9));
    CHECK(got.edges.size() == 6);
    CHECK(got.certified);
  }
}

TEST_CASE("matching frozen values") {
  const Box box = unit_box(2);
  CHECK(solve_mm_exact(make_points({{0.0, 0.0}, {0.0, 0.3}}), box, 0.5, 512).value ==
        doctest::Approx(std::pow(0.3, 0.5)).epsilon(1e-12));
  // odd n: one point stays unmatched at no cost
  CHECK(solve_mm_exact(make_points({{0.0, 0.0}, {0.0, 0.1}, {0.0, 0.9}}), box, 1.0, 512)
            .value == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("matching matches pairing enumeration") {
  const Box box = unit_box(2);
  Rng rng = make_stream(SeedSpec{32}, 10, 0);
  for (int c = 0; c < 25; ++c) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 9);  // covers odd sizes
    const PointSet ps = sample_uniform(rng, n, 2);
    const double p = (c % 2 == 0) ? 1.0 : 0.7;
    const Solution got = solve_mm_exact(ps, box, p, 512);
    CHECK(got.value == doctest::Approx(oracle::mm_value(ps, p)).epsilon(1e-9));
    CHECK(static_cast<int>(got.edges.size()) == n / 2);
  }
}

TEST_CASE("matching size limit") {
  Rng rng = make_stream(SeedSpec{33}, 20, 0);
  const PointSet ps = sample_uniform(rng, 20, 2);
  CHECK_THROWS_AS(solve_mm_exact(ps, unit_box(2), 1.0, 16), SizeError);
}

TEST_CASE("tour frozen values") {
  const Box box = unit_box(2);
  CHECK(solve_tsp_exact(
            make_points({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}), box, 1.0, 16)
            .value == doctest::Approx(4.0).epsilon(1e-12));
  // the 2-point tour traverses its edge twice
  CHECK(solve_tsp_exact(make_points({{0.0, 0.0}, {0.0, 1.0}}), box, 2.0, 16).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  Rng rng = make_stream(SeedSpec{34}, 20, 0);
  CHECK_THROWS_AS(solve_tsp_exact(sample_uniform(rng, 20, 2), box, 1.0, 16), SizeError);
}

TEST_CASE("tour matches permutation brute force") {
  const Box box = unit_box(2);
  Rng rng = make_stream(SeedSpec{35}, 8, 0);
  for (int c = 0; c < 15; ++c) {
    const PointSet ps = sample_uniform(rng, 8, 2);
    const Solution got = solve_tsp_exact(ps, box, 0.7, 16);
    CHECK(got.value == doctest::Approx(oracle::tsp_value(ps, 0.7)).epsilon(1e-9));
    CHECK(got.edges.size() == 8);
  }
}

TEST_CASE("heuristics are feasible upper bounds") {
  const Box box = unit_box(2);
  Rng rng = make_stream(SeedSpec{36}, 12, 0);
  for (int c = 0; c < 40; ++c) {
    const int n = static_cast<int>(rng.next_u64() % 13);
    const PointSet ps = sample_uniform(rng, n, 2);
    const double p = 0.5 + rng.uniform01();

    const Solution hm = solve_mm_greedy(ps, box, p);
    CHECK_FALSE(hm.certified);
    CHECK(hm.value >= solve_mm_exact(ps, box, p, 512).value - 1e-9);

    const Solution ht = solve_tsp_two_opt(ps, box, p);
    CHECK_FALSE(ht.certified);
    if (n <= 12) CHECK(ht.value >= solve_tsp_exact(ps, box, p, 16).value - 1e-9);
  }
  PointSet empty(2);
  CHECK(solve_mm_greedy(empty, box, 1.0).value == 0.0);
  CHECK(solve_tsp_two_opt(empty, box, 1.0).value == 0.0);
}

TEST_CASE("two-opt recovers the sorted tour on collinear points") {
  PointSet ps(2);
  for (int i = 0; i < 9; ++i) ps.push(Point{0.1 * i, 0.5});
  const Solution tour = solve_tsp_two_opt(ps, unit_box(2), 1.0);
  // optimal collinear tour sweeps out and back: twice the extent
  CHECK(tour.value == doctest::Approx(1.6).epsilon(1e-9));
}

TEST_CASE("solve scales as t to the p") {
  Rng rng = make_stream(SeedSpec{37}, 8, 0);
  for (int c = 0; c < 20; ++c) {
    const PointSet ps = sample_uniform(rng, 8, 2);
    const double t = 0.1 + 9.9 * rng.uniform01();
    Point y{10.0 * rng.uniform01() - 5.0, 10.0 * rng.uniform01() - 5.0};
    const Box box = unit_box(2);
    const double base = solve_mst(ps, box, 1.3).value;
    const double mapped =
        solve_mst(affine_image(ps, y, t), affine_image(box, y, t), 1.3).value;
    CHECK(mapped == doctest::Approx(std::pow(t, 1.3) * base).epsilon(1e-9));
  }
}

TEST_CASE("growth bound holds on random instances") {
  Rng rng = make_stream(SeedSpec{38}, 12, 0);
  const Box box = unit_box(2);
  for (int c = 0; c < 200; ++c) {
    const int n = static_cast<int>(rng.next_u64() % 13);
    const PointSet ps = sample_uniform(rng, n, 2);
    const double p = 0.5 + rng.uniform01();
    for (Functional f : {Functional::MM, Functional::MST, Functional::TSP}) {
      const GrowthCheck g = growth_bound_check(ps, box, p, f);
      CHECK(g.ok);
    }
  }
  PointSet empty(2);
  CHECK(growth_bound_check(empty, box, 1.0, Functional::MST).ok);
}

TEST_CASE("solution verification accepts solver output") {
  Rng rng = make_stream(SeedSpec{39}, 9, 0);
  for (int c = 0; c < 30; ++c) {
    const int n = static_cast<int>(rng.next_u64() % 10);
    const double p = (c % 3 == 0) ? 0.5 : 1.0 + rng.uniform01();
    for (Functional f : {Functional::MM, Functional::MST, Functional::TSP}) {
      for (Variant v : {Variant::Plain, Variant::Dual}) {
        Instance inst = make_instance(sample_uniform(rng, n, 2), p, f, v);
        const Solution sol = solve(inst);
        CHECK_NOTHROW(verify_solution(inst, sol));
      }
    }
  }
}

TEST_CASE("duplicate points are handled exactly") {
  const Box box = unit_box(2);
  const PointSet dup = make_points({{0.4, 0.4}, {0.4, 0.4}, {0.4, 0.4}, {0.9, 0.9}});
  // two duplicates pair for free, the third must still reach the far point
  CHECK(solve_mm_exact(dup, box, 1.0, 512).value ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(solve_mst(dup, box, 1.0).value ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(solve_tsp_exact(dup, box, 1.0, 16).value ==
        doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(1e-9));
}

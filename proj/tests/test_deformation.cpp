#include "doctest.h"
#include "plateau/deformation.hpp"
#include "support.hpp"

#include <random>

using namespace plateau;
using test::cell;
using test::rectangle_loop;

namespace {

ProblemPtr disk_problem(int w = 3, int h = 3) {
  const GridSpec g = GridSpec::box({w + 2, h + 2, 2});
  CubicalComplex a = rectangle_loop(g, w, h, 1, 1, 1);
  auto classes = canonical_L(a, 2, Coeffs::gf2());
  return make_problem(g, std::move(a), 2, std::move(classes), Coeffs::gf2(), DensityField::constant(1));
}

std::set<Cell> flat_disk(int w, int h) {
  std::set<Cell> out;
  for (int x = 1; x < 1 + w; ++x)
    for (int y = 1; y < 1 + h; ++y) out.insert(cell({x, y, 1}, 0b011));
  return out;
}

}  // namespace

TEST_CASE("cell weight is density at the barycenter times measure") {
  const GridSpec g(2, 1, {0, 0}, {2, 2});
  CubicalComplex a(g);
  for (int x = 0; x < 2; ++x) {
    a.insert(cell({x, 0}, 0b01));
    a.insert(cell({x, 2}, 0b01));
    a.insert(cell({0, x}, 0b10));
    a.insert(cell({2, x}, 0b10));
  }
  auto classes = canonical_L(a, 2, Coeffs::gf2());
  const auto p = make_problem(g, a, 2, classes, Coeffs::gf2(),
                              DensityField::affine({Rational(1), Rational(1), Rational(0)}, g));
  // Side 1/2: barycenter (1/4, 1/4), f = 5/4, measure 1/4.
  CHECK(cell_weight(*p, cell({0, 0}, 0b11)) == Rational(5, 16));
  CHECK(cell_weight(*p, cell({1, 0}, 0b11)) == Rational(7, 16));
  const Surface full = initial_fill(p);
  CHECK(surface_weight(full) == Rational(5 + 7 + 5 + 7, 16));
  CHECK(surface_measure(full) == 1);
}

TEST_CASE("solve finds the flat disk") {
  const auto p = disk_problem();
  const auto [x, rep] = solve(p, SolverConfig{});
  CHECK(rep.final_weight == 9);
  CHECK(x.mcells() == flat_disk(3, 3));
  CHECK(rep.spans_verified);
  CHECK(rep.one_minimal);
  CHECK(rep.initial_weight >= rep.final_weight);
  CHECK(rep.start_weights.size() == 2);
}

TEST_CASE("every removal order reaches a 1-minimal spanning surface") {
  const auto p = disk_problem(2, 3);
  for (RemovalOrder o : {RemovalOrder::HeaviestFirst, RemovalOrder::FarthestFirst, RemovalOrder::Random}) {
    SolverConfig cfg;
    cfg.removal_order = o;
    cfg.seed = 11;
    const auto [x, rep] = greedy_minimize(initial_fill(p), cfg);
    CHECK(spans(x));
    CHECK(is_one_minimal(x));
    for (const Move& m : rep.moves) CHECK(m.delta <= 0);
  }
}

TEST_CASE("removal order names round trip") {
  for (RemovalOrder o : {RemovalOrder::HeaviestFirst, RemovalOrder::FarthestFirst, RemovalOrder::Random})
    CHECK(parse_removal_order(to_string(o)) == o);
  CHECK_THROWS_AS(parse_removal_order("sideways"), std::invalid_argument);
}

TEST_CASE("empty L gives the empty surface") {
  const GridSpec g = GridSpec::box({3, 3, 2});
  CubicalComplex a = rectangle_loop(g, 1, 1, 1, 1, 1);
  const auto p = make_problem(g, a, 2, {}, Coeffs::gf2(), DensityField::constant(1));
  const auto [x, rep] = solve(p, SolverConfig{});
  CHECK(x.mcells().empty());
  CHECK(rep.final_weight == 0);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  cfg.local_box_side = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.max_passes = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("local replacement keeps spanning and never adds weight") {
  const auto p = disk_problem();
  std::mt19937 rng(5);
  const Surface full = initial_fill(p);
  for (int side : {1, 2}) {
    for (const Subbox& r : admissible_subboxes(*p, side)) {
      // A random superset of the flat disk spans; replacement must keep that.
      std::set<Cell> cells = flat_disk(3, 3);
      for (const Cell& c : full.mcells())
        if (rng() % 4 == 0) cells.insert(c);
      const Surface x(p, cells);
      REQUIRE(spans(x));
      const ReplaceResult rr = local_replace(x, r);
      CHECK(rr.delta <= 0);
      CHECK(surface_weight(rr.surface) == surface_weight(x) + rr.delta);
      CHECK(spans(rr.surface));
      CHECK(spans_via_restriction_image(*p, rr.surface.complex()));
      // Cells outside the open box are untouched.
      for (const Cell& c : full.mcells())
        if (!in_open_box(c, r, 3)) CHECK(x.has(c) == rr.surface.has(c));
      CHECK(rr.changed == (rr.delta < 0));
    }
  }
}

TEST_CASE("local replacement leaves the optimum alone") {
  const auto p = disk_problem();
  const Surface x(p, flat_disk(3, 3));
  for (const Subbox& r : admissible_subboxes(*p, 2)) {
    const ReplaceResult rr = local_replace(x, r);
    CHECK_FALSE(rr.changed);
    CHECK(rr.surface == x);
  }
}

TEST_CASE("local replacement rejects boxes that meet A") {
  const auto p = disk_problem();
  const Surface x(p, flat_disk(3, 3));
  Subbox r;
  r.lo = Coord{0, 0, 0};
  r.hi = Coord{2, 2, 2};
  CHECK_THROWS_AS(local_replace(x, r), std::invalid_argument);
}

TEST_CASE("admissible subboxes avoid A in their open interior") {
  const auto p = disk_problem();
  for (int side : {1, 2})
    for (const Subbox& r : admissible_subboxes(*p, side))
      p->boundary.for_each_cell([&](const Cell& c) { CHECK_FALSE(in_open_box(c, r, 3)); });
}

TEST_CASE("skeleton push respects the measure bound") {
  const auto p = disk_problem();
  const Surface x(p, flat_disk(3, 3));
  for (int qx = 0; qx <= 3; ++qx)
    for (int qy = 0; qy <= 3; ++qy) {
      const Coord q{qx, qy, 0};
      Subbox box;
      box.lo = q;
      box.hi = Coord{qx + 2, qy + 2, 2};
      bool meets = false;
      p->boundary.for_each_cell([&](const Cell& c) { meets = meets || in_open_box(c, box, 3); });
      if (meets) {
        CHECK_THROWS_AS(skeleton_push(x, q), std::invalid_argument);
        continue;
      }
      const auto [y, rep] = skeleton_push(x, q);
      CHECK(rep.pushed_measure <= rep.bound);
      CHECK(rep.bound == Rational(12 * 12) * rep.interior_measure);
      if (rep.applied) {
        CHECK(spans(y));
        CHECK(rep.dominated);
      } else {
        CHECK(y == x);
      }
      CHECK_FALSE((rep.applied && rep.rolled_back));
    }
}

TEST_CASE("skeleton push on a flat sheet through the center is rolled back") {
  // Every interior cell of a side-2 cube contains its center, so the cone is
  // degenerate and the sheet lands on a band that no longer spans.
  const auto p = disk_problem();
  const Surface x(p, flat_disk(3, 3));
  const auto [y, rep] = skeleton_push(x, Coord{1, 1, 0});
  CHECK(rep.interior_cells == 4);
  CHECK(rep.pushed_cells == 16);
  CHECK(rep.rolled_back);
  CHECK_FALSE(rep.applied);
  CHECK(y == x);
}

TEST_CASE("skeleton push empties the open cube of the full skeleton") {
  const auto p = disk_problem();
  const Surface x = initial_fill(p);
  const Coord q{1, 1, 0};
  const auto [y, rep] = skeleton_push(x, q);
  CHECK(rep.interior_cells == 12);
  CHECK(rep.pushed_cells == 24);
  REQUIRE(rep.applied);
  CHECK(rep.spans_after);
  CHECK(spans(y));
  Subbox box;
  box.lo = q;
  box.hi = Coord{3, 3, 2};
  for (const Cell& c : y.mcells()) CHECK_FALSE(in_open_box(c, box, 3));
  CHECK(surface_weight(y) == surface_weight(x) - 12);
}

TEST_CASE("skeleton push is a no-op on an empty cube") {
  const GridSpec g = GridSpec::box({5, 5, 4});
  CubicalComplex a = rectangle_loop(g, 3, 3, 1, 1, 1);
  auto classes = canonical_L(a, 2, Coeffs::gf2());
  const auto tall = make_problem(g, a, 2, classes, Coeffs::gf2(), DensityField::constant(1));
  const Surface z(tall, flat_disk(3, 3));
  const auto [y, rep] = skeleton_push(z, Coord{1, 1, 2});
  CHECK(rep.interior_cells == 0);
  CHECK(y == z);
}

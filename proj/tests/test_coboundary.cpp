#include "doctest.h"
#include "plateau/coboundary.hpp"
#include "support.hpp"

#include <random>

using namespace plateau;
using test::cell;
using test::rectangle_loop;

namespace {

// Boundary surface of a union of unit cubes.
CubicalComplex cube_union_boundary(const GridSpec& g, const std::set<Coord>& cubes) {
  std::map<Cell, int> count;
  for (const Coord& a : cubes)
    for (const Cell& f : faces(Cell{a, 0b111})) ++count[f];
  CubicalComplex out(g);
  for (const auto& [f, k] : count)
    if (k == 1) out.insert(f);
  return out;
}

std::set<Coord> square_annulus_cubes() {
  std::set<Coord> cubes;
  for (int x = 1; x < 5; ++x)
    for (int y = 1; y < 5; ++y)
      for (int z = 1; z < 3; ++z)
        if (x < 2 || x >= 4 || y < 2 || y >= 4) cubes.insert(Coord{x, y, z});
  return cubes;
}

template <typename S>
Index betti(const CubicalComplex& x, int d, const Coeffs& c, bool reduced) {
  return cohomology<S>(x, d, c, reduced).dim();
}

std::set<Cell> all_mcells(const GridSpec& g, int m) {
  const CubicalComplex s = build_skeleton(g, m);
  return s.cells(m);
}

}  // namespace

TEST_CASE("cohomology of small complexes") {
  const Coeffs g2 = Coeffs::gf2(), q = Coeffs::rationals();
  const GridSpec g = GridSpec::box({4, 4, 4});
  const CubicalComplex loop = rectangle_loop(g, 2, 3, 1);
  CHECK(betti<Gf2>(loop, 0, g2, true) == 0);
  CHECK(betti<Gf2>(loop, 0, g2, false) == 1);
  CHECK(betti<Rational>(loop, 1, q, true) == 1);

  CubicalComplex two = loop;
  two.insert_all(rectangle_loop(g, 1, 1, 3));
  CHECK(betti<Gf2>(two, 0, g2, true) == 1);
  CHECK(betti<Gf2>(two, 1, g2, true) == 2);

  CHECK(betti<Gf2>(CubicalComplex(g), 0, g2, true) == 0);

  const CubicalComplex skel = build_skeleton(GridSpec::box({2, 2, 2}), 2);
  CHECK(betti<Rational>(skel, 1, q, true) == 0);
  CHECK(betti<Rational>(skel, 2, q, true) == 8);
}

TEST_CASE("torus surface has the Betti numbers of a torus") {
  const GridSpec g = GridSpec::box({6, 6, 4});
  const CubicalComplex t = cube_union_boundary(g, square_annulus_cubes());
  for (const Coeffs& c : {Coeffs::gf2(), Coeffs::gfp(3), Coeffs::rationals()}) {
    with_scalar(c, [&](auto tag) {
      using S = decltype(tag);
      CHECK(betti<S>(t, 0, c, false) == 1);
      CHECK(betti<S>(t, 1, c, false) == 2);
      CHECK(betti<S>(t, 2, c, false) == 1);
    });
  }
  CHECK(t.euler_characteristic() == 0);
}

TEST_CASE("alternating sum of Betti numbers matches the Euler characteristic") {
  std::mt19937 rng(3);
  const GridSpec g = GridSpec::box({3, 3, 2});
  const CubicalComplex full = build_skeleton(g, 3);
  for (int trial = 0; trial < 20; ++trial) {
    CubicalComplex x(g);
    for (int d = 0; d <= 3; ++d)
      for (const Cell& c : full.cells(d))
        if (rng() % 5 == 0) x.insert(c);
    for (const Coeffs& c : {Coeffs::gf2(), Coeffs::rationals()}) {
      long long chi = 0;
      with_scalar(c, [&](auto tag) {
        using S = decltype(tag);
        for (int d = 0; d <= 3; ++d) chi += (d % 2 ? -1 : 1) * static_cast<long long>(betti<S>(x, d, c, false));
      });
      CHECK(chi == x.euler_characteristic());
    }
  }
}

TEST_CASE("canonical L") {
  const GridSpec g = GridSpec::box({4, 4, 6});
  CubicalComplex rings = rectangle_loop(g, 2, 2, 1, 1, 1);
  CHECK(canonical_L(rings, 2, Coeffs::gf2()).size() == 1);
  rings.insert_all(rectangle_loop(g, 2, 2, 3, 1, 1));
  rings.insert_all(rectangle_loop(g, 2, 2, 5, 1, 1));
  CHECK(canonical_L(rings, 2, Coeffs::gf2()).size() == 3);
  CHECK(canonical_L(rings, 2, Coeffs::rationals()).size() == 3);
  CHECK(canonical_L(CubicalComplex(g), 2, Coeffs::gf2()).empty());

  CubicalComplex theta = rectangle_loop(g, 2, 2, 1);
  theta.insert(cell({1, 0, 1}, 0b010));
  theta.insert(cell({1, 1, 1}, 0b010));
  CHECK_THROWS_AS(canonical_L(theta, 2, Coeffs::gf2()), std::invalid_argument);

  // m = 1: one point projects to zero; two points give two (equal) classes.
  CubicalComplex pts(g);
  pts.insert(cell({0, 0, 0}, 0));
  CHECK(canonical_L(pts, 1, Coeffs::gf2()).empty());
  pts.insert(cell({2, 2, 2}, 0));
  CHECK(canonical_L(pts, 1, Coeffs::gf2()).size() == 2);
}

TEST_CASE("problem validation") {
  const GridSpec g = GridSpec::box({3, 3});
  const CubicalComplex a = rectangle_loop(g, 3, 3);
  const auto l = canonical_L(a, 2, Coeffs::gf2());
  CHECK_NOTHROW(make_problem(g, a, 2, l, Coeffs::gf2(), DensityField::constant(1)));
  CohomologyClass zero;
  zero.degree = 1;
  zero.rep[cell({0, 0}, 0b01)] = 1;
  zero.rep[cell({0, 0}, 0b10)] = 1;  // coboundary of the corner vertex
  try {
    make_problem(g, a, 2, {zero}, Coeffs::gf2(), DensityField::constant(1));
    FAIL("zero class accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "L must avoid the zero class");
  }
  CHECK_THROWS(make_problem(g, a, 3, l, Coeffs::gf2(), DensityField::constant(1)));
  CHECK_THROWS(make_problem(g, a, 2, l, Coeffs::gf2(), DensityField::constant(0)));
  CohomologyClass stray;
  stray.degree = 1;
  stray.rep[cell({1, 1}, 0b01)] = 1;
  CHECK_THROWS(make_problem(g, a, 2, {stray}, Coeffs::gf2(), DensityField::constant(1)));
}

TEST_CASE("disk spanning is exact") {
  const GridSpec g = GridSpec::box({3, 3});
  const CubicalComplex a = rectangle_loop(g, 3, 3);
  const auto p = make_problem(g, a, 2, canonical_L(a, 2, Coeffs::gf2()), Coeffs::gf2(), DensityField::constant(1));
  const std::set<Cell> full = all_mcells(g, 2);
  CHECK(spans(Surface(p, full)));
  CHECK_FALSE(spans(Surface(p, {})));
  for (const Cell& c : full) {
    std::set<Cell> holed = full;
    holed.erase(c);
    CHECK_FALSE(spans(Surface(p, holed)));
  }
}

TEST_CASE("extension route agrees with the restriction-image route") {
  std::mt19937 rng(17);
  const GridSpec g = GridSpec::box({2, 2, 2});
  const CubicalComplex a = rectangle_loop(g, 2, 2, 1);
  const std::set<Cell> full = all_mcells(g, 2);
  for (const Coeffs& c : {Coeffs::gf2(), Coeffs::gfp(3), Coeffs::rationals()}) {
    const auto p = make_problem(g, a, 2, canonical_L(a, 2, c), c, DensityField::constant(1));
    int spanning = 0;
    for (int trial = 0; trial < 60; ++trial) {
      std::set<Cell> pick;
      for (const Cell& s : full)
        if (rng() % 3 != 0) pick.insert(s);
      const Surface x(p, pick);
      const bool fast = spans(x);
      CHECK(fast == spans_via_restriction_image(*p, x.complex()));
      spanning += fast;
    }
    CHECK(spanning > 0);
    CHECK(spanning < 60);
  }
}

TEST_CASE("relative coboundary domination") {
  const GridSpec g = GridSpec::box({2, 2});
  const CubicalComplex t = rectangle_loop(g, 2, 2);
  const CubicalComplex fill = build_skeleton(g, 2);
  const Coeffs c = Coeffs::gf2();
  CHECK(relative_coboundary_dominates(fill, fill, t, 1, c));
  CHECK(relative_coboundary_dominates(t, t, t, 1, c));
  CHECK_FALSE(relative_coboundary_dominates(t, fill, t, 1, c));
  CHECK(relative_coboundary_dominates(fill, t, t, 1, c));
}

TEST_CASE("linking numbers of dual loops") {
  const GridSpec g = GridSpec::box({6, 6, 5});
  const CubicalComplex ring = rectangle_loop(g, 2, 2, 2, 1, 1);
  auto column_loop = [](int x_in, int x_out) {
    DualLoop loop;
    for (int z = 0; z <= 4; ++z) loop.push_back(Coord{x_in, 1, z});
    for (int x = x_in + 1; x < x_out; ++x) loop.push_back(Coord{x, 1, 4});
    for (int z = 4; z >= 0; --z) loop.push_back(Coord{x_out, 1, z});
    for (int x = x_out - 1; x > x_in; --x) loop.push_back(Coord{x, 1, 0});
    return loop;
  };
  const long long lk = linking_number(column_loop(1, 4), ring, g);
  CHECK((lk == 1 || lk == -1));
  CHECK(linking_number(column_loop(4, 5), ring, g) == 0);
  DualLoop reversed = column_loop(1, 4);
  std::reverse(reversed.begin(), reversed.end());
  CHECK(linking_number(reversed, ring, g) == -lk);

  CubicalComplex rings(g);
  for (int z : {1, 2, 3}) rings.insert_all(rectangle_loop(g, 2, 2, z, 1, 1));
  for (const CubicalComplex& r : connected_components(rings)) {
    const long long k = linking_number(column_loop(2, 4), r, g);
    CHECK((k == 1 || k == -1));
  }
  CHECK_THROWS(linking_number(DualLoop{Coord{0, 0, 0}, Coord{2, 0, 0}}, ring, g));
}

TEST_CASE("spanning property suite") {
  const GridSpec g = GridSpec::box({2, 2, 2});
  const CubicalComplex a = rectangle_loop(g, 2, 2, 1);
  const auto p = make_problem(g, a, 2, canonical_L(a, 2, Coeffs::gf2()), Coeffs::gf2(), DensityField::constant(1));
  const PropertySuiteReport rep = spanning_property_suite(p, 100, 7);
  CHECK(rep.ok());
  CHECK(rep.superset_checked == 100);
  CHECK(rep.low_dim_checked == 100);
}

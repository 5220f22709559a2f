#ifndef PLATEAU_TEST_SUPPORT_HPP
#define PLATEAU_TEST_SUPPORT_HPP

#include "plateau/lattice.hpp"

#include <initializer_list>

namespace plateau::test {

inline Cell cell(std::initializer_list<int> anchor, unsigned axes) {
  Cell c;
  int i = 0;
  for (int v : anchor) c.anchor[i++] = v;
  c.axes = static_cast<std::uint8_t>(axes);
  return c;
}

/// Boundary loop of [x0, x0+w] x [y0, y0+h] in the plane z = z0.
inline CubicalComplex rectangle_loop(const GridSpec& g, int w, int h, int z0 = 0, int x0 = 0, int y0 = 0) {
  CubicalComplex a(g);
  for (int x = x0; x < x0 + w; ++x) {
    a.insert(cell({x, y0, z0}, 0b001));
    a.insert(cell({x, y0 + h, z0}, 0b001));
  }
  for (int y = y0; y < y0 + h; ++y) {
    a.insert(cell({x0, y, z0}, 0b010));
    a.insert(cell({x0 + w, y, z0}, 0b010));
  }
  return a;
}

}  // namespace plateau::test

#endif

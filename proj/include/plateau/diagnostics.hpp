#ifndef PLATEAU_DIAGNOSTICS_HPP
#define PLATEAU_DIAGNOSTICS_HPP

// Measurements on discrete surfaces: slice integrals, density profiles,
// regularity and monotonicity ratios, and the exact minimum weight of a
// spanning surface for small instances.
//
// Points and radii are physical (lattice units times the cell side).

#include "plateau/deformation.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace plateau {

using Point = std::vector<Rational>;

/// Volume of the unit m-ball with pi replaced by 355/113.
Rational unit_ball_volume(int m);

/// Whether p lies in the closed cell.
bool cell_contains_point(const Cell& c, const Point& p, const GridSpec& g);

struct SliceReport {
  Point center;
  Rational width;
  std::vector<Rational> radii;   // band midpoints (k + 1/2) w
  std::vector<Rational> slices;  // weighted m-measure of band k, divided by w
  Rational lhs;                  // sum slice * w
  Rational rhs;                  // weighted m-measure
  double ratio = 0;              // lhs / rhs, 0 for empty X
  bool within_slack = true;      // 1/sqrt(n) <= lhs/rhs <= sqrt(n), exact
  /// Second estimate: each cell whose closed box meets the sphere of radius
  /// radii[k] contributes f * side^(m-1) to crossing_slices[k].
  std::vector<Rational> crossing_slices;
  Rational crossing_lhs;
  double crossing_ratio = 0;
};

/// Bands [k w, (k+1) w) by barycenter distance from the center over the
/// m-cells of X \ A. Throws if w < side.
SliceReport slicing_check(const Surface& x, const Point& center, const Rational& width);

struct DensityProfile {
  Point center;
  std::vector<Rational> radii;
  std::vector<Rational> g;     // weighted measure of cells with barycenter within r
  std::vector<double> ratios;  // g / (alpha_m r^m)
  double lower_density = 0;    // min ratio
};

/// Cells counted are the m-cells of X including those of A. Radii must be
/// positive and increasing; throws if p is not on X.
DensityProfile density_profile(const Surface& x, const Point& p, const std::vector<Rational>& radii);

struct RegularityReport {
  Rational c_hat;
  Rational radius_max;
  std::size_t points = 0;
  std::size_t samples = 0;
  Point worst_point;
  Rational worst_radius;
};

/// min over sample points and radii of measure(X(p, r)) / r^m, unweighted.
/// Sample points are the vertices of m-cells of X \ A that are not in A,
/// and the barycenters of those m-cells. Throws on an empty sample.
RegularityReport regularity_constant(const Surface& x, const std::vector<Rational>& radii);

struct MonotonicityReport {
  Point center;
  std::vector<std::pair<Rational, Rational>> pairs;  // (r, s), s <= r
  std::vector<double> ratios;                        // (g(r)/r^m) / (g(s)/s^m)
  double min_ratio = 0;
  double k_hat = 0;  // min ratio^(1/r)
  bool warn = false;
};

MonotonicityReport monotonicity_check(const Surface& x, const Point& p,
                                      const std::vector<std::pair<Rational, Rational>>& pairs,
                                      double warn_threshold = 0.5);

void write_slices_csv(std::ostream& os, const SliceReport& r);
void write_profile_csv(std::ostream& os, const DensityProfile& d);

// ---------------------------------------------------------------------------
// Exact minimum over spanning surfaces.

struct IsoperimetricReport {
  std::string method;  // "labeling" (codimension one over GF(2)) or "cells"
  bool exact = false;  // search finished within the budget
  bool found = false;  // some spanning surface was seen
  Rational minimum;    // best weight found
  Rational lower_bound;
  std::set<Cell> argmin;  // m-cells outside A
  std::size_t nodes = 0;
  std::size_t budget = 0;
  /// Spanning surfaces met during the search, in discovery order.
  std::vector<std::set<Cell>> incumbents;
};

/// Branch and bound over spanning surfaces. In codimension one over GF(2)
/// it labels the cubes of the box by cohomology data and bounds with
/// minimum cuts of a covering graph; otherwise it branches on m-cells with
/// spans() pruning. `budget` counts search nodes. Throws std::logic_error if
/// an exact minimum is zero while L is nonempty.
IsoperimetricReport isoperimetric_scan(const ProblemPtr& problem, std::size_t budget);

/// Forces the cell-branching search even where labeling applies.
IsoperimetricReport isoperimetric_scan_cells(const ProblemPtr& problem, std::size_t budget);

}  // namespace plateau

#endif

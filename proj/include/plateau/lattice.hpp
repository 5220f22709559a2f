#ifndef PLATEAU_LATTICE_HPP
#define PLATEAU_LATTICE_HPP

// Cubical complexes on a dyadic grid of R^n.
//
// A cell is an anchor (its minimal corner, in lattice units at the grid
// level) together with the bitmask of axes along which it extends. Cells of
// side 2^-k therefore have integer anchors and the barycenter of a cell has
// doubled coordinates 2*anchor + free_axes.

#include "plateau/rational.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace plateau {

inline constexpr int kMaxDim = 6;
using Coord = std::array<int, kMaxDim>;

struct Cell {
  Coord anchor{};
  std::uint8_t axes = 0;

  int dim() const { return std::popcount(static_cast<unsigned>(axes)); }
  bool is_free(int axis) const { return (axes >> axis) & 1u; }
  /// Twice the barycenter coordinate along `axis`.
  int doubled_center(int axis) const { return 2 * anchor[axis] + (is_free(axis) ? 1 : 0); }

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    std::size_t h = c.axes;
    for (int v : c.anchor) h = h * 1000003u ^ static_cast<std::size_t>(v + 0x9e3779b9);
    return h;
  }
};

class GridSpec {
 public:
  GridSpec() = default;
  /// Box [lo, hi] in lattice units at `level`; throws on n outside [1, 6] or
  /// an empty extent.
  GridSpec(int n, int level, std::vector<int> lo, std::vector<int> hi);
  /// Box [0, extents] at `level`.
  static GridSpec box(std::vector<int> extents, int level = 0);

  int n() const { return n_; }
  int level() const { return level_; }
  int lo(int axis) const { return lo_[axis]; }
  int hi(int axis) const { return hi_[axis]; }
  int extent(int axis) const { return hi_[axis] - lo_[axis]; }
  /// Cell side 2^-level.
  Rational side() const { return dyadic(level_); }
  bool contains(const Cell& c) const;
  bool contains_point(const Coord& vertex) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_ = 1;
  int level_ = 0;
  Coord lo_{};
  Coord hi_{};
};

/// The 2*dim(cell) codimension-one faces, lower then upper per free axis.
std::vector<Cell> faces(const Cell& cell);

/// Faces with their incidence numbers under the lexicographic orientation:
/// the t-th free axis (t = 0, 1, ...) contributes (-1)^t (upper - lower).
std::vector<std::pair<Cell, int>> oriented_faces(const Cell& cell);

/// All faces of every codimension, including the cell itself.
std::vector<Cell> closure_of(const Cell& cell);

/// (2^-k)^dim(cell).
Rational cell_measure(const Cell& cell, const GridSpec& grid);

class CubicalComplex {
 public:
  CubicalComplex() = default;
  explicit CubicalComplex(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  /// Adds the cell and all of its faces.
  void insert(const Cell& c);
  void insert_all(const CubicalComplex& other);
  /// Removes a single cell without touching its faces or cofaces. The caller
  /// is responsible for leaving the complex face-closed.
  void erase(const Cell& c);

  bool contains(const Cell& c) const;
  const std::set<Cell>& cells(int d) const;
  std::size_t count(int d) const { return cells(d).size(); }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  /// Largest d with a d-cell, or -1 when empty.
  int dim() const;
  bool is_face_closed() const;
  bool is_subcomplex_of(const CubicalComplex& other) const;
  std::vector<Cell> all_cells() const;
  long long euler_characteristic() const;

  template <typename F>
  void for_each_cell(F&& f) const {
    for (const auto& layer : cells_)
      for (const Cell& c : layer) f(c);
  }

  friend bool operator==(const CubicalComplex& a, const CubicalComplex& b) {
    return a.grid_ == b.grid_ && a.cells_ == b.cells_;
  }

 private:
  GridSpec grid_;
  std::vector<std::set<Cell>> cells_;
};

CubicalComplex build_skeleton(const GridSpec& grid, int d);

/// All d-cells inside the closed box [lo, hi], sorted; lo may equal hi on
/// some axes.
std::vector<Cell> cells_in_box(const Coord& lo, const Coord& hi, int n, int d);

/// Face-closure of an arbitrary cell collection.
CubicalComplex closure(const GridSpec& grid, const std::vector<Cell>& cells);

struct BallQuery {
  std::vector<Rational> center;  // lattice units
  Rational radius;               // lattice units, > 0
};

enum class BallMode { ClosedBall, SphereShell };

/// Squared distance (lattice units) from the cell barycenter to p.
Rational barycenter_distance_sq(const Cell& c, const std::vector<Rational>& p, int n);

/// Cells selected by barycenter: within r (closed ball), or with distance in
/// (r - sqrt(n)/2, r] (shell). Returned face-closed.
CubicalComplex restrict_to_ball(const CubicalComplex& x, const BallQuery& q, BallMode mode);

/// Components under face-path connectivity, ordered by their least cell.
std::vector<CubicalComplex> connected_components(const CubicalComplex& x);

/// Line format: header "n k lo_1..lo_n hi_1..hi_n", then one cell per line
/// as "a_1 .. a_n axesmask". Comment lines start with '#'.
void write_complex(std::ostream& os, const CubicalComplex& x);
CubicalComplex read_complex(std::istream& is);

/// OFF mesh of the 2-cells (n = 2 or 3), physical coordinates.
void write_off(std::ostream& os, const CubicalComplex& x);

std::string describe(const Cell& c, int n);

}  // namespace plateau

#endif

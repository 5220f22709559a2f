#ifndef PLATEAU_DEFORMATION_HPP
#define PLATEAU_DEFORMATION_HPP

// Minimization of the weighted m-measure of X \ A over spanning surfaces:
// full-skeleton start, greedy removal, exhaustive replacement inside small
// subboxes, and the central-projection push onto the frontier of a cube.

#include "plateau/coboundary.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace plateau {

/// HeaviestFirst breaks weight ties by cell order. FarthestFirst removes
/// cells in decreasing distance from A, heavier cells first at equal
/// distance.
enum class RemovalOrder { HeaviestFirst, FarthestFirst, Random };
std::string to_string(RemovalOrder o);
/// "heaviest", "farthest" or "random"; throws std::invalid_argument.
RemovalOrder parse_removal_order(const std::string& s);

struct SolverConfig {
  RemovalOrder removal_order = RemovalOrder::HeaviestFirst;
  int local_box_side = 2;  // in cells, 1 or 2
  int max_passes = 8;
  std::uint64_t seed = 1;
  /// Subboxes with more interior m-cells than this are skipped.
  int max_local_cells = 16;
  /// Also descend from a FarthestFirst start and keep the lighter result.
  bool multi_start = true;

  void validate() const;
};

enum class MoveKind { Remove, LocalReplace, SkeletonPush };
std::string to_string(MoveKind k);

struct Move {
  MoveKind kind = MoveKind::Remove;
  Rational delta;      // weight change, <= 0
  std::string where;   // cell or subbox
};

struct SolveReport {
  Rational initial_weight;
  Rational final_weight;
  std::vector<Move> moves;
  bool spans_verified = false;
  bool one_minimal = false;
  int passes = 0;
  RemovalOrder chosen_order = RemovalOrder::HeaviestFirst;
  std::vector<Rational> start_weights;  // final weight of each start
  std::size_t subboxes_visited = 0;
  std::size_t subboxes_skipped = 0;  // too many interior cells
  double wall_seconds = 0;
};

/// f(barycenter) * measure, exact.
Rational cell_weight(const SpanningProblem& p, const Cell& c);
/// Sum of cell weights over the m-cells of X outside A.
Rational surface_weight(const Surface& x);
/// Unweighted m-dimensional measure of X \ A.
Rational surface_measure(const Surface& x);

/// A together with every m-cell of the box; asserted to span.
Surface initial_fill(const ProblemPtr& problem);

/// Removes m-cells one at a time, keeping each removal only if X still
/// spans. A single pass is already 1-minimal because spanning is inherited
/// by supersets.
std::pair<Surface, SolveReport> greedy_minimize(const Surface& x0, const SolverConfig& cfg);

/// True when no single m-cell of X \ A can be removed.
bool is_one_minimal(const Surface& x);

/// Closed box [lo, hi] in lattice units.
struct Subbox {
  Coord lo{};
  Coord hi{};
};

std::string describe(const Subbox& r, int n);

/// Cells whose relative interior lies in the open box.
bool in_open_box(const Cell& c, const Subbox& r, int n);
/// Cells contained in the closed box.
bool in_closed_box(const Cell& c, const Subbox& r, int n);

/// Cubes of side `side` (clipped to the grid) whose open interior avoids A.
std::vector<Subbox> admissible_subboxes(const SpanningProblem& p, int side);

struct ReplaceResult {
  Surface surface;
  Rational delta;  // <= 0
  bool changed = false;
  bool skipped = false;  // too many interior cells to enumerate
  std::size_t candidates_checked = 0;
};

/// Replaces X inside the open subbox by the cheapest filling Y whose
/// frontier trace equals X's and whose restriction image onto that trace is
/// dominated by X's. Throws std::invalid_argument if A meets the open box,
/// std::logic_error if the result fails to span.
ReplaceResult local_replace(const Surface& x, const Subbox& r, int max_local_cells = 16);

struct PushReport {
  bool applied = false;
  bool rolled_back = false;
  bool dominated = false;
  bool spans_after = false;
  std::size_t interior_cells = 0;
  std::size_t pushed_cells = 0;
  Rational interior_measure;
  Rational pushed_measure;
  Rational bound;  // (4n)^m * interior_measure
};

/// Pushes X inside the open cube [q_lo, q_lo + 2]^n onto its frontier by
/// central projection from the cube center. A frontier m-cell enters the
/// image when the cone from the center through an interior m-cell of X meets
/// it. The measure bound is asserted; if the restriction image is not
/// dominated or spanning is lost, X is returned unchanged.
std::pair<Surface, PushReport> skeleton_push(const Surface& x, const Coord& q_lo);

/// initial_fill, greedy_minimize, then sweeps of local_replace (each
/// followed by another greedy pass) until a sweep improves nothing or
/// max_passes is reached. With multi_start the descent is repeated from a
/// FarthestFirst greedy pass and the lighter surface is kept, the configured
/// order winning ties.
std::pair<Surface, SolveReport> solve(const ProblemPtr& problem, const SolverConfig& cfg);

}  // namespace plateau

#endif

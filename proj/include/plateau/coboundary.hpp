#ifndef PLATEAU_COBOUNDARY_HPP
#define PLATEAU_COBOUNDARY_HPP

// Cellular cohomology of cubical complexes, restriction maps of inclusions
// and the spanning predicate: X spans A with respect to L when no class of
// L lies in the image of H^{m-1}(X) -> H^{m-1}(A).

#include "plateau/density.hpp"
#include "plateau/exact_linalg.hpp"
#include "plateau/lattice.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace plateau {

/// Coefficient-independent cochain: cell -> exact value.
using Cochain = std::map<Cell, Rational>;

struct CohomologyClass {
  int degree = 0;
  Cochain rep;
};

/// Dense positions for a sorted list of cells.
class CellIndex {
 public:
  CellIndex() = default;
  explicit CellIndex(const std::set<Cell>& cells) : cells_(cells.begin(), cells.end()) { build(); }
  explicit CellIndex(std::vector<Cell> cells) : cells_(std::move(cells)) { build(); }

  Index size() const { return static_cast<Index>(cells_.size()); }
  const Cell& operator[](Index i) const { return cells_[static_cast<std::size_t>(i)]; }
  std::optional<Index> find(const Cell& c) const {
    auto it = pos_.find(c);
    if (it == pos_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<Cell>& cells() const { return cells_; }

 private:
  void build() {
    pos_.reserve(cells_.size());
    for (std::size_t i = 0; i < cells_.size(); ++i) pos_.emplace(cells_[i], static_cast<Index>(i));
  }
  std::vector<Cell> cells_;
  std::unordered_map<Cell, Index, CellHash> pos_;
};

template <typename Scalar>
Scalar incidence(int sign, const Coeffs& coeffs) {
  return FieldTraits<Scalar>::from_rational(Rational(sign), coeffs);
}

/// Matrix of the coboundary from cochains on `lower` to cochains on
/// `upper`: entry (c, f) is the incidence [c : f]. Faces missing from
/// `lower` are skipped.
template <typename Scalar>
Matrix<Scalar> coboundary_matrix(const CellIndex& lower, const CellIndex& upper, const Coeffs& coeffs) {
  Matrix<Scalar> m = Matrix<Scalar>::Zero(upper.size(), lower.size());
  for (Index r = 0; r < upper.size(); ++r)
    for (const auto& [f, sign] : oriented_faces(upper[r]))
      if (auto col = lower.find(f)) m(r, *col) = incidence<Scalar>(sign, coeffs);
  return m;
}

template <typename Scalar>
Vector<Scalar> to_vector(const Cochain& c, const CellIndex& index, const Coeffs& coeffs) {
  Vector<Scalar> v = Vector<Scalar>::Zero(index.size());
  for (const auto& [cell, value] : c) {
    auto i = index.find(cell);
    if (!i) throw std::invalid_argument("cochain value on a cell outside the complex");
    v(*i) = FieldTraits<Scalar>::from_rational(value, coeffs);
  }
  return v;
}

template <typename Scalar>
Cochain to_cochain(const Vector<Scalar>& v, const CellIndex& index) {
  Cochain c;
  for (Index i = 0; i < v.size(); ++i)
    if (!is_zero(v(i))) c[index[i]] = FieldTraits<Scalar>::lift(v(i));
  return c;
}

/// The cochain complex of a cubical complex: per-degree cell indices and
/// coboundary matrices. Degree -1 is the augmentation used for reduced
/// cohomology (one cochain, sent to the all-ones 0-cochain).
template <typename Scalar>
class CochainComplex {
 public:
  CochainComplex(const CubicalComplex& x, const Coeffs& coeffs) : coeffs_(coeffs) {
    const int n = x.grid().n();
    index_.reserve(static_cast<std::size_t>(n + 1));
    for (int d = 0; d <= n; ++d) index_.emplace_back(x.cells(d));
  }

  const Coeffs& coeffs() const { return coeffs_; }
  int top_degree() const { return static_cast<int>(index_.size()) - 1; }
  const CellIndex& cells(int d) const {
    static const CellIndex kEmpty;
    if (d < 0 || d > top_degree()) return kEmpty;
    return index_[static_cast<std::size_t>(d)];
  }
  bool empty() const {
    for (const auto& idx : index_)
      if (idx.size()) return false;
    return true;
  }

  /// delta_d : C^d -> C^{d+1}, as a (#(d+1)-cells x #d-cells) matrix.
  Matrix<Scalar> delta(int d, bool reduced = true) const {
    if (d == -1) {
      const Index rows = cells(0).size();
      if (!reduced || rows == 0) return Matrix<Scalar>::Zero(rows, 0);
      return Matrix<Scalar>::Constant(rows, 1, incidence<Scalar>(1, coeffs_));
    }
    return coboundary_matrix<Scalar>(cells(d), cells(d + 1), coeffs_);
  }

 private:
  Coeffs coeffs_;
  std::vector<CellIndex> index_;
};

template <typename Scalar>
struct CohomologySpace {
  int degree = 0;
  bool reduced = true;
  CellIndex cells;
  Subspace<Scalar> cocycles;
  Subspace<Scalar> coboundaries;
  Matrix<Scalar> basis_reps;  // one representative cochain per row

  Index dim() const { return basis_reps.rows(); }
  /// Whether v is a cocycle whose class is zero.
  bool is_trivial(const Vector<Scalar>& v) const { return coboundaries.contains(v); }
};

/// Column space of m as a subspace of Scalar^rows.
template <typename Scalar>
Subspace<Scalar> column_space(const Matrix<Scalar>& m) {
  if (m.cols() == 0) return Subspace<Scalar>(m.rows());
  return Subspace<Scalar>::span(m.transpose());
}

template <typename Scalar>
CohomologySpace<Scalar> cohomology(const CochainComplex<Scalar>& cx, int d, bool reduced = true) {
  if (d < 0) throw std::invalid_argument("cohomology: negative degree");
  CohomologySpace<Scalar> h;
  h.degree = d;
  h.reduced = reduced;
  h.cells = cx.cells(d);
  const Index n_cells = h.cells.size();
  Matrix<Scalar> up = cx.delta(d, reduced);
  h.cocycles = up.rows() == 0 ? Subspace<Scalar>::full(n_cells) : kernel_basis(up);
  h.coboundaries = column_space<Scalar>(cx.delta(d - 1, reduced));
  // Extend a coboundary basis to a cocycle basis; the added vectors are the
  // class representatives.
  Subspace<Scalar> acc = h.coboundaries;
  std::vector<Index> picked;
  for (Index i = 0; i < h.cocycles.dim(); ++i) {
    Vector<Scalar> v = h.cocycles.basis().row(i).transpose();
    if (acc.contains(v)) continue;
    picked.push_back(i);
    Matrix<Scalar> one(1, n_cells);
    one.row(0) = v.transpose();
    acc = acc + Subspace<Scalar>::span(one);
  }
  h.basis_reps.resize(static_cast<Index>(picked.size()), n_cells);
  for (std::size_t k = 0; k < picked.size(); ++k) h.basis_reps.row(static_cast<Index>(k)) = h.cocycles.basis().row(picked[k]);
  return h;
}

template <typename Scalar>
CohomologySpace<Scalar> cohomology(const CubicalComplex& x, int d, const Coeffs& coeffs, bool reduced = true) {
  return cohomology(CochainComplex<Scalar>(x, coeffs), d, reduced);
}

/// Image of H^d(X) -> H^d(A) for A a subcomplex of X, as restricted cocycles
/// together with the coboundaries of A (membership is modulo the latter).
template <typename Scalar>
struct RestrictionImage {
  CellIndex cells;  // d-cells of A
  Subspace<Scalar> image;
  Subspace<Scalar> coboundaries;

  /// Dimension of the image inside H^d(A).
  Index class_dim() const { return (image + coboundaries).dim() - coboundaries.dim(); }
  bool contains_class(const Vector<Scalar>& v) const { return in_subspace_mod(v, image, coboundaries); }
  /// image(this) contained in image(other) + coboundaries, both over the same A.
  bool within(const RestrictionImage& other) const {
    return (other.image + other.coboundaries).contains(image);
  }
};

template <typename Scalar>
RestrictionImage<Scalar> restriction_image(const CubicalComplex& x, const CubicalComplex& a, int d,
                                           const Coeffs& coeffs) {
  if (!a.is_subcomplex_of(x)) throw std::invalid_argument("restriction_image: A is not a subcomplex of X");
  CochainComplex<Scalar> cx(x, coeffs), ca(a, coeffs);
  CohomologySpace<Scalar> hx = cohomology(cx, d, true);
  RestrictionImage<Scalar> out;
  out.cells = ca.cells(d);
  const Index na = out.cells.size();
  Matrix<Scalar> restricted = Matrix<Scalar>::Zero(hx.cocycles.dim(), na);
  for (Index j = 0; j < na; ++j) {
    const Index col = *hx.cells.find(out.cells[j]);
    restricted.col(j) = hx.cocycles.basis().col(col);
  }
  out.image = Subspace<Scalar>::span(restricted);
  out.coboundaries = column_space<Scalar>(ca.delta(d - 1, true));
  return out;
}

/// K*(Y, T) contains K*(Xin, T): every class of T extending over Y also
/// extends over Xin.
template <typename Scalar>
bool relative_coboundary_dominates(const CubicalComplex& y, const CubicalComplex& xin, const CubicalComplex& t, int d,
                                   const Coeffs& coeffs) {
  if (!t.is_subcomplex_of(y) || !t.is_subcomplex_of(xin))
    throw std::invalid_argument("relative_coboundary_dominates: T must lie in both Y and Xin");
  return restriction_image<Scalar>(y, t, d, coeffs).within(restriction_image<Scalar>(xin, t, d, coeffs));
}

bool relative_coboundary_dominates(const CubicalComplex& y, const CubicalComplex& xin, const CubicalComplex& t, int d,
                                   const Coeffs& coeffs);

/// Calls f with a value of the scalar type selected by `coeffs`.
template <typename F>
decltype(auto) with_scalar(const Coeffs& coeffs, F&& f) {
  switch (coeffs.kind) {
    case Coeffs::Kind::GF2: return f(Gf2{});
    case Coeffs::Kind::GFp: return f(ModP{});
    case Coeffs::Kind::Rational: break;
  }
  return f(Rational{});
}

// ---------------------------------------------------------------------------
// Spanning problems.

struct SpanningProblem {
  GridSpec grid;
  CubicalComplex boundary;  // A
  int m = 2;
  std::vector<CohomologyClass> classes;  // L
  Coeffs coeffs = Coeffs::gf2();
  DensityField density;
};

using ProblemPtr = std::shared_ptr<const SpanningProblem>;

/// Validates and freezes a problem. Throws std::invalid_argument when A
/// leaves the box, m is outside [2, n], dim A > m, or some l is not a
/// nonzero cohomology class of A ("L must avoid the zero class").
ProblemPtr make_problem(const GridSpec& grid, CubicalComplex boundary, int m, std::vector<CohomologyClass> classes,
                        const Coeffs& coeffs, DensityField density);

/// A candidate X = A + face-closure(m-cells).
class Surface {
 public:
  Surface() = default;
  Surface(ProblemPtr problem, std::set<Cell> mcells);

  const SpanningProblem& problem() const { return *problem_; }
  const ProblemPtr& problem_ptr() const { return problem_; }
  /// m-cells of X outside A.
  const std::set<Cell>& mcells() const { return mcells_; }
  bool has(const Cell& c) const { return mcells_.count(c) > 0; }
  void add(const Cell& c);
  void remove(const Cell& c) { mcells_.erase(c); }
  CubicalComplex complex() const;

  friend bool operator==(const Surface& a, const Surface& b) { return a.mcells_ == b.mcells_; }

 private:
  ProblemPtr problem_;
  std::set<Cell> mcells_;
};

/// Per class of L: whether it extends over the complex X (X must contain A).
std::vector<bool> extendable_classes(const SpanningProblem& problem, const CubicalComplex& x);
/// Same, for X = A + closure(mcells), without materializing X.
std::vector<bool> extendable_classes(const SpanningProblem& problem, const std::set<Cell>& mcells);

bool spans(const Surface& x);
bool spans(const SpanningProblem& problem, const CubicalComplex& x);

/// Spanning verdict computed through restriction_image and in_subspace_mod;
/// slower, kept as an independent route.
bool spans_via_restriction_image(const SpanningProblem& problem, const CubicalComplex& x);

/// One generator class per component of A, extended by zero. Components
/// must be closed (m-1)-manifold complexes; over fields other than GF(2)
/// they must also be orientable. For m = 1 the classes are projected to
/// reduced H^0 and the zero projection (single component) is dropped.
std::vector<CohomologyClass> canonical_L(const CubicalComplex& a, int m, const Coeffs& coeffs);

/// Closed loop on the dual lattice: consecutive cube anchors differing by one
/// unit along one axis (the last connects back to the first). Dual loops
/// cross primal squares transversally and never meet edges or vertices.
using DualLoop = std::vector<Coord>;

/// Linking number of a dual loop with a closed lattice curve in n = 3.
/// Computed as the signed intersection count of the loop with a rational
/// 2-chain bounded by the oriented curve; throws std::logic_error if the
/// count is not integral.
long long linking_number(const DualLoop& gamma, const CubicalComplex& curve, const GridSpec& grid);

/// Squares crossed by the steps of a dual loop, with crossing signs.
std::vector<std::pair<Cell, int>> crossed_squares(const DualLoop& gamma);

struct PropertySuiteReport {
  int trials = 0;
  int superset_checked = 0;
  int superset_failed = 0;
  int isolated_checked = 0;
  int isolated_failed = 0;
  int low_dim_checked = 0;
  int low_dim_failed = 0;
  std::vector<std::string> witnesses;

  bool ok() const { return superset_failed == 0 && isolated_failed == 0 && low_dim_failed == 0; }
};

/// Randomized checks: spanning is preserved by adding m-cells, unaffected
/// by isolated lower-dimensional cells outside A, and complexes of
/// dimension <= m-2 have trivial H^{m-1}.
PropertySuiteReport spanning_property_suite(const ProblemPtr& problem, int trials, std::uint64_t seed);

}  // namespace plateau

#endif

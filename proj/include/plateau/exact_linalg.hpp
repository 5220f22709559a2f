#ifndef PLATEAU_EXACT_LINALG_HPP
#define PLATEAU_EXACT_LINALG_HPP

// Exact linear algebra over GF(2), GF(p) and Q on dense Eigen storage.
//
// All routines pivot on the lowest available column index and then on the
// lowest row index, so bases and reports are reproducible. GF(2) inputs take
// a bit-packed elimination path.

#include "plateau/field.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace plateau {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

template <typename Scalar>
struct RowReduction {
  Matrix<Scalar> reduced;
  Index rank = 0;
  std::vector<Index> pivot_cols;
};

namespace detail {

/// Dense GF(2) rows packed 64 columns per word.
class BitRows {
 public:
  BitRows(Index rows, Index cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64),
        data_(static_cast<std::size_t>(rows * words_), 0) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  bool get(Index r, Index c) const { return (row(r)[c >> 6] >> (c & 63)) & 1u; }
  void set(Index r, Index c) { row(r)[c >> 6] |= std::uint64_t{1} << (c & 63); }
  void flip(Index r, Index c) { row(r)[c >> 6] ^= std::uint64_t{1} << (c & 63); }
  std::uint64_t* row(Index r) { return data_.data() + r * words_; }
  const std::uint64_t* row(Index r) const { return data_.data() + r * words_; }
  void xor_into(Index dst, Index src, Index from_word = 0) {
    std::uint64_t* d = row(dst);
    const std::uint64_t* s = row(src);
    for (Index w = from_word; w < words_; ++w) d[w] ^= s[w];
  }
  void swap_rows(Index a, Index b) {
    if (a == b) return;
    std::uint64_t* x = row(a);
    std::uint64_t* y = row(b);
    for (Index w = 0; w < words_; ++w) std::swap(x[w], y[w]);
  }
  bool row_is_zero(Index r, Index from_col, Index to_col) const {
    for (Index c = from_col; c < to_col; ++c)
      if (get(r, c)) return false;
    return true;
  }

  /// Forward (or full, if `jordan`) elimination with pivots restricted to
  /// columns below `pivot_limit`. Returns the pivot columns; pivot rows end
  /// up first, in pivot order.
  std::vector<Index> eliminate(Index pivot_limit, bool jordan) {
    std::vector<Index> pivots;
    Index r = 0;
    for (Index c = 0; c < pivot_limit && r < rows_; ++c) {
      const Index w = c >> 6;
      const std::uint64_t bit = std::uint64_t{1} << (c & 63);
      Index found = -1;
      for (Index i = r; i < rows_; ++i)
        if (row(i)[w] & bit) { found = i; break; }
      if (found < 0) continue;
      swap_rows(r, found);
      for (Index i = jordan ? 0 : r + 1; i < rows_; ++i)
        if (i != r && (row(i)[w] & bit)) xor_into(i, r, jordan ? 0 : w);
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

 private:
  Index rows_, cols_, words_;
  std::vector<std::uint64_t> data_;
};

inline BitRows pack(const Matrix<Gf2>& m) {
  BitRows bits(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j).v) bits.set(i, j);
  return bits;
}

inline Matrix<Gf2> unpack(const BitRows& bits) {
  Matrix<Gf2> m = Matrix<Gf2>::Zero(bits.rows(), bits.cols());
  for (Index i = 0; i < bits.rows(); ++i)
    for (Index j = 0; j < bits.cols(); ++j)
      if (bits.get(i, j)) m(i, j) = Gf2(1);
  return m;
}

}  // namespace detail

/// Gauss-Jordan reduction. Pivots are searched only among the first
/// `pivot_limit` columns (all columns by default), which lets callers reduce
/// an augmented matrix without pivoting on the right-hand side.
template <typename Scalar>
RowReduction<Scalar> row_reduce(const Matrix<Scalar>& m, Index pivot_limit = -1) {
  if (pivot_limit < 0 || pivot_limit > m.cols()) pivot_limit = m.cols();
  RowReduction<Scalar> out;
  out.reduced = m;
  Matrix<Scalar>& a = out.reduced;
  Index r = 0;
  for (Index c = 0; c < pivot_limit && r < a.rows(); ++c) {
    Index found = -1;
    for (Index i = r; i < a.rows(); ++i)
      if (!is_zero(a(i, c))) { found = i; break; }
    if (found < 0) continue;
    if (found != r) a.row(r).swap(a.row(found));
    const Scalar inv = Scalar(1) / a(r, c);
    for (Index j = c; j < a.cols(); ++j) a(r, j) = a(r, j) * inv;
    for (Index i = 0; i < a.rows(); ++i) {
      if (i == r || is_zero(a(i, c))) continue;
      const Scalar f = a(i, c);
      for (Index j = c; j < a.cols(); ++j)
        if (!is_zero(a(r, j))) a(i, j) = a(i, j) - f * a(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

template <>
inline RowReduction<Gf2> row_reduce(const Matrix<Gf2>& m, Index pivot_limit) {
  if (pivot_limit < 0 || pivot_limit > m.cols()) pivot_limit = m.cols();
  detail::BitRows bits = detail::pack(m);
  RowReduction<Gf2> out;
  out.pivot_cols = bits.eliminate(pivot_limit, /*jordan=*/true);
  out.rank = static_cast<Index>(out.pivot_cols.size());
  out.reduced = detail::unpack(bits);
  return out;
}

template <typename Scalar>
Index rank(const Matrix<Scalar>& m) {
  return row_reduce(m).rank;
}

/// A subspace of Scalar^ambient_dim stored as a reduced row echelon basis.
template <typename Scalar>
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(Index ambient_dim) : ambient_(ambient_dim), basis_(0, ambient_dim) {}

  /// Row space of `rows`.
  static Subspace span(const Matrix<Scalar>& rows) {
    Subspace s(rows.cols());
    if (rows.rows() == 0) return s;
    RowReduction<Scalar> rr = row_reduce(rows);
    s.basis_ = rr.reduced.topRows(rr.rank);
    s.pivots_ = std::move(rr.pivot_cols);
    return s;
  }
  static Subspace full(Index ambient_dim) {
    return span(Matrix<Scalar>::Identity(ambient_dim, ambient_dim));
  }

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.rows(); }
  const Matrix<Scalar>& basis() const { return basis_; }
  const std::vector<Index>& pivots() const { return pivots_; }

  /// Reduces v against the echelon basis; the result is zero iff v lies in
  /// the subspace.
  Vector<Scalar> residual(Vector<Scalar> v) const {
    if (v.size() != ambient_) throw std::invalid_argument("Subspace: dimension mismatch");
    for (Index i = 0; i < dim(); ++i) {
      const Scalar c = v(pivots_[i]);
      if (!is_zero(c)) v -= c * basis_.row(i).transpose();
    }
    return v;
  }
  bool contains(const Vector<Scalar>& v) const {
    Vector<Scalar> r = residual(v);
    for (Index i = 0; i < r.size(); ++i)
      if (!is_zero(r(i))) return false;
    return true;
  }
  bool contains(const Subspace& other) const {
    for (Index i = 0; i < other.dim(); ++i)
      if (!contains(Vector<Scalar>(other.basis().row(i).transpose()))) return false;
    return true;
  }

  friend Subspace operator+(const Subspace& a, const Subspace& b) {
    if (a.ambient_ != b.ambient_) throw std::invalid_argument("Subspace: dimension mismatch");
    Matrix<Scalar> stacked(a.dim() + b.dim(), a.ambient_);
    stacked.topRows(a.dim()) = a.basis_;
    stacked.bottomRows(b.dim()) = b.basis_;
    return span(stacked);
  }

 private:
  Index ambient_ = 0;
  Matrix<Scalar> basis_;
  std::vector<Index> pivots_;
};

template <>
inline Vector<Gf2> Subspace<Gf2>::residual(Vector<Gf2> v) const {
  if (v.size() != ambient_) throw std::invalid_argument("Subspace: dimension mismatch");
  for (Index i = 0; i < dim(); ++i)
    if (v(pivots_[i]).v)
      for (Index j = pivots_[i]; j < ambient_; ++j) v(j) += basis_(i, j);
  return v;
}

/// Basis of {v : M v = 0}.
template <typename Scalar>
Subspace<Scalar> kernel_basis(const Matrix<Scalar>& m) {
  const Index n = m.cols();
  if (m.rows() == 0) return Subspace<Scalar>::full(n);
  RowReduction<Scalar> rr = row_reduce(m);
  std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
  for (Index c : rr.pivot_cols) is_pivot[c] = 1;
  Matrix<Scalar> vecs = Matrix<Scalar>::Zero(n - rr.rank, n);
  Index k = 0;
  for (Index f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    vecs(k, f) = Scalar(1);
    for (Index i = 0; i < rr.rank; ++i) vecs(k, rr.pivot_cols[i]) = -rr.reduced(i, f);
    ++k;
  }
  for (Index i = 0; i < vecs.rows(); ++i) {
    Vector<Scalar> prod = m * vecs.row(i).transpose();
    for (Index j = 0; j < prod.size(); ++j)
      if (!is_zero(prod(j))) throw std::logic_error("kernel_basis: vector not in kernel");
  }
  return Subspace<Scalar>::span(vecs);
}

/// Some x with M x = b, or nullopt when b is outside the column space.
template <typename Scalar>
std::optional<Vector<Scalar>> solve(const Matrix<Scalar>& m, const Vector<Scalar>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong length");
  Matrix<Scalar> aug(m.rows(), m.cols() + 1);
  aug.leftCols(m.cols()) = m;
  aug.col(m.cols()) = b;
  RowReduction<Scalar> rr = row_reduce(aug, m.cols());
  for (Index i = rr.rank; i < aug.rows(); ++i)
    if (!is_zero(rr.reduced(i, m.cols()))) return std::nullopt;
  Vector<Scalar> x = Vector<Scalar>::Zero(m.cols());
  for (Index i = 0; i < rr.rank; ++i) x(rr.pivot_cols[i]) = rr.reduced(i, m.cols());
  Vector<Scalar> check = m * x - b;
  for (Index j = 0; j < check.size(); ++j)
    if (!is_zero(check(j))) throw std::logic_error("solve: substitution check failed");
  return x;
}

/// For each column b_j of B, whether M x = b_j is solvable. One forward
/// elimination serves every right-hand side.
template <typename Scalar>
std::vector<bool> solvable_columns(const Matrix<Scalar>& m, const Matrix<Scalar>& rhs) {
  if (rhs.rows() != m.rows()) throw std::invalid_argument("solvable_columns: row mismatch");
  Matrix<Scalar> aug(m.rows(), m.cols() + rhs.cols());
  aug.leftCols(m.cols()) = m;
  aug.rightCols(rhs.cols()) = rhs;
  RowReduction<Scalar> rr = row_reduce(aug, m.cols());
  std::vector<bool> ok(static_cast<std::size_t>(rhs.cols()), true);
  for (Index i = rr.rank; i < aug.rows(); ++i)
    for (Index j = 0; j < rhs.cols(); ++j)
      if (!is_zero(rr.reduced(i, m.cols() + j))) ok[j] = false;
  return ok;
}

template <>
inline std::vector<bool> solvable_columns(const Matrix<Gf2>& m, const Matrix<Gf2>& rhs) {
  if (rhs.rows() != m.rows()) throw std::invalid_argument("solvable_columns: row mismatch");
  detail::BitRows bits(m.rows(), m.cols() + rhs.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j).v) bits.set(i, j);
    for (Index j = 0; j < rhs.cols(); ++j)
      if (rhs(i, j).v) bits.set(i, m.cols() + j);
  }
  const auto pivots = bits.eliminate(m.cols(), /*jordan=*/false);
  std::vector<bool> ok(static_cast<std::size_t>(rhs.cols()), true);
  for (Index i = static_cast<Index>(pivots.size()); i < bits.rows(); ++i)
    for (Index j = 0; j < rhs.cols(); ++j)
      if (bits.get(i, m.cols() + j)) ok[j] = false;
  return ok;
}

/// Whether v lies in S + Q.
template <typename Scalar>
bool in_subspace_mod(const Vector<Scalar>& v, const Subspace<Scalar>& s, const Subspace<Scalar>& q) {
  if (v.size() != s.ambient_dim() || s.ambient_dim() != q.ambient_dim())
    throw std::invalid_argument("in_subspace_mod: dimension mismatch");
  return (s + q).contains(v);
}

}  // namespace plateau

#endif

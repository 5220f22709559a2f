#include "plateau/coboundary.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace plateau {

namespace {

// Rows of the extension system: m-cells of X that are not in A.
// Unknowns: (m-1)-faces of those cells that are not in A. Right-hand side
// per class l: minus the contribution of l on the faces lying in A.
// Class l extends over X iff its column is solvable.
template <typename Scalar>
std::vector<bool> extension_test(const SpanningProblem& p, const std::vector<Cell>& rows) {
  const std::size_t nl = p.classes.size();
  if (nl == 0) return {};
  std::set<Cell> free_faces;
  for (const Cell& c : rows)
    for (const Cell& f : faces(c))
      if (!p.boundary.contains(f)) free_faces.insert(f);
  const CellIndex cols(free_faces);
  const auto nr = static_cast<Index>(rows.size());
  Matrix<Scalar> m = Matrix<Scalar>::Zero(nr, cols.size());
  Matrix<Scalar> rhs = Matrix<Scalar>::Zero(nr, static_cast<Index>(nl));
  for (Index r = 0; r < nr; ++r) {
    for (const auto& [f, sign] : oriented_faces(rows[static_cast<std::size_t>(r)])) {
      if (auto j = cols.find(f)) {
        m(r, *j) = incidence<Scalar>(sign, p.coeffs);
        continue;
      }
      for (std::size_t i = 0; i < nl; ++i) {
        auto it = p.classes[i].rep.find(f);
        if (it == p.classes[i].rep.end()) continue;
        rhs(r, static_cast<Index>(i)) -=
            incidence<Scalar>(sign, p.coeffs) * FieldTraits<Scalar>::from_rational(it->second, p.coeffs);
      }
    }
  }
  return solvable_columns(m, rhs);
}

std::vector<bool> dispatch_extension(const SpanningProblem& p, const std::vector<Cell>& rows) {
  return with_scalar(p.coeffs, [&](auto tag) { return extension_test<decltype(tag)>(p, rows); });
}

bool none_extend(const std::vector<bool>& ext) {
  return std::none_of(ext.begin(), ext.end(), [](bool b) { return b; });
}

}  // namespace

bool relative_coboundary_dominates(const CubicalComplex& y, const CubicalComplex& xin, const CubicalComplex& t, int d,
                                   const Coeffs& coeffs) {
  return with_scalar(coeffs, [&](auto tag) {
    return relative_coboundary_dominates<decltype(tag)>(y, xin, t, d, coeffs);
  });
}

ProblemPtr make_problem(const GridSpec& grid, CubicalComplex boundary, int m, std::vector<CohomologyClass> classes,
                        const Coeffs& coeffs, DensityField density) {
  if (!(boundary.grid() == grid)) throw std::invalid_argument("problem: A is built on a different grid");
  if (!boundary.is_face_closed()) throw std::invalid_argument("problem: A is not face-closed");
  if (m < 2 || m > grid.n()) throw std::invalid_argument("problem: m must lie in [2, n]");
  if (boundary.dim() > m) throw std::invalid_argument("problem: dim A exceeds m");
  density.validate(grid);
  with_scalar(coeffs, [&](auto tag) {
    using S = decltype(tag);
    CochainComplex<S> ca(boundary, coeffs);
    const Matrix<S> up = ca.delta(m - 1);
    const Subspace<S> bd = column_space<S>(ca.delta(m - 2));
    for (const CohomologyClass& l : classes) {
      if (l.degree != m - 1) throw std::invalid_argument("problem: classes of L must have degree m - 1");
      for (const auto& [cell, v] : l.rep)
        if (cell.dim() != m - 1 || !boundary.contains(cell))
          throw std::invalid_argument("problem: cochain of L supported outside the (m-1)-cells of A: " +
                                      describe(cell, grid.n()));
      const Vector<S> v = to_vector<S>(l.rep, ca.cells(m - 1), coeffs);
      const Vector<S> dv = up * v;
      for (Index i = 0; i < dv.size(); ++i)
        if (!is_zero(dv(i))) throw std::invalid_argument("problem: a class of L is not a cocycle on A");
      if (bd.contains(v)) throw std::invalid_argument("L must avoid the zero class");
    }
  });
  auto p = std::make_shared<SpanningProblem>();
  p->grid = grid;
  p->boundary = std::move(boundary);
  p->m = m;
  p->classes = std::move(classes);
  p->coeffs = coeffs;
  p->density = std::move(density);
  return p;
}

Surface::Surface(ProblemPtr problem, std::set<Cell> mcells) : problem_(std::move(problem)) {
  if (!problem_) throw std::invalid_argument("surface: null problem");
  for (const Cell& c : mcells) add(c);
}

void Surface::add(const Cell& c) {
  if (c.dim() != problem_->m) throw std::invalid_argument("surface: cell of wrong dimension " + describe(c, problem_->grid.n()));
  if (!problem_->grid.contains(c)) throw std::out_of_range("surface: cell outside the box " + describe(c, problem_->grid.n()));
  if (!problem_->boundary.contains(c)) mcells_.insert(c);
}

CubicalComplex Surface::complex() const {
  CubicalComplex x = problem_->boundary;
  for (const Cell& c : mcells_) x.insert(c);
  return x;
}

std::vector<bool> extendable_classes(const SpanningProblem& problem, const CubicalComplex& x) {
  if (!problem.boundary.is_subcomplex_of(x)) throw std::invalid_argument("spans: X must contain A");
  std::vector<Cell> rows;
  for (const Cell& c : x.cells(problem.m))
    if (!problem.boundary.contains(c)) rows.push_back(c);
  return dispatch_extension(problem, rows);
}

std::vector<bool> extendable_classes(const SpanningProblem& problem, const std::set<Cell>& mcells) {
  std::vector<Cell> rows;
  rows.reserve(mcells.size());
  for (const Cell& c : mcells)
    if (!problem.boundary.contains(c)) rows.push_back(c);
  return dispatch_extension(problem, rows);
}

bool spans(const Surface& x) { return none_extend(extendable_classes(x.problem(), x.mcells())); }

bool spans(const SpanningProblem& problem, const CubicalComplex& x) {
  return none_extend(extendable_classes(problem, x));
}

bool spans_via_restriction_image(const SpanningProblem& problem, const CubicalComplex& x) {
  return with_scalar(problem.coeffs, [&](auto tag) {
    using S = decltype(tag);
    const RestrictionImage<S> ri = restriction_image<S>(x, problem.boundary, problem.m - 1, problem.coeffs);
    for (const CohomologyClass& l : problem.classes)
      if (ri.contains_class(to_vector<S>(l.rep, ri.cells, problem.coeffs))) return false;
    return true;
  });
}

std::vector<CohomologyClass> canonical_L(const CubicalComplex& a, int m, const Coeffs& coeffs) {
  std::vector<CohomologyClass> out;
  if (a.empty()) return out;
  if (m < 1) throw std::invalid_argument("canonical_L: m must be positive");
  const int d = m - 1;
  const int n = a.grid().n();
  if (a.dim() != d) throw std::invalid_argument("canonical_L: A must have dimension m - 1");
  for (const CubicalComplex& k : connected_components(a)) {
    // Closed manifold link condition, and purity.
    if (d >= 1) {
      std::map<Cell, int> cofaces;
      for (const Cell& top : k.cells(d))
        for (const Cell& f : faces(top)) ++cofaces[f];
      for (const Cell& f : k.cells(d - 1)) {
        auto it = cofaces.find(f);
        const int c = it == cofaces.end() ? 0 : it->second;
        if (c != 2)
          throw std::invalid_argument("canonical_L: component is not a closed manifold at " + describe(f, n));
      }
    }
    for (int e = 0; e < d; ++e)
      for (const Cell& c : k.cells(e)) {
        bool has_top = false;
        for (const Cell& top : k.cells(d)) {
          bool inside = true;
          for (int i = 0; i < n && inside; ++i) {
            const int lo = top.anchor[i], hi = top.anchor[i] + (top.is_free(i) ? 1 : 0);
            const int clo = c.anchor[i], chi = c.anchor[i] + (c.is_free(i) ? 1 : 0);
            inside = lo <= clo && chi <= hi;
          }
          if (inside) {
            has_top = true;
            break;
          }
        }
        if (!has_top) throw std::invalid_argument("canonical_L: component is not pure at " + describe(c, n));
      }
    CohomologyClass l;
    l.degree = d;
    if (d == 0) {
      for (const Cell& v : k.cells(0)) l.rep[v] = 1;
    } else {
      l.rep[*k.cells(d).begin()] = 1;
    }
    const bool nonzero = with_scalar(coeffs, [&](auto tag) {
      using S = decltype(tag);
      CochainComplex<S> ck(a, coeffs);
      const Subspace<S> bd = column_space<S>(ck.delta(d - 1, true));
      return !bd.contains(to_vector<S>(l.rep, ck.cells(d), coeffs));
    });
    if (!nonzero) {
      if (d == 0) continue;
      throw std::invalid_argument("canonical_L: component is not orientable over " + coeffs.name());
    }
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<std::pair<Cell, int>> crossed_squares(const DualLoop& gamma) {
  static constexpr int kNormalSign[3] = {1, -1, 1};
  std::vector<std::pair<Cell, int>> out;
  const std::size_t len = gamma.size();
  for (std::size_t i = 0; i < len; ++i) {
    const Coord& u = gamma[i];
    const Coord& v = gamma[(i + 1) % len];
    int axis = -1, step = 0, moved = 0;
    for (int a = 0; a < kMaxDim; ++a) {
      const int diff = v[a] - u[a];
      if (diff == 0) continue;
      ++moved;
      axis = a;
      step = diff;
    }
    if (moved != 1 || (step != 1 && step != -1) || axis > 2)
      throw std::invalid_argument("dual loop: consecutive cubes must differ by one unit step in R^3");
    Cell sq;
    sq.anchor = u;
    if (step == 1) ++sq.anchor[axis];
    sq.axes = static_cast<std::uint8_t>(0b111u & ~(1u << axis));
    out.emplace_back(sq, step * kNormalSign[axis]);
  }
  return out;
}

long long linking_number(const DualLoop& gamma, const CubicalComplex& curve, const GridSpec& grid) {
  if (grid.n() != 3) throw std::invalid_argument("linking_number: requires n = 3");
  if (curve.dim() != 1) throw std::invalid_argument("linking_number: curve must be 1-dimensional");
  if (gamma.empty()) throw std::invalid_argument("linking_number: empty loop");
  const Coeffs q = Coeffs::rationals();
  const CellIndex verts(curve.cells(0)), edges(curve.cells(1));
  // Fundamental cycle: the kernel of the boundary map on the curve.
  const Matrix<Rational> boundary1 = coboundary_matrix<Rational>(verts, edges, q).transpose();
  const Subspace<Rational> cycles = kernel_basis(boundary1);
  if (cycles.dim() != 1) throw std::invalid_argument("linking_number: curve must be a single closed loop");
  Vector<Rational> z = cycles.basis().row(0).transpose();
  for (Index i = 0; i < z.size(); ++i) {
    if (z(i) != 1 && z(i) != -1) throw std::invalid_argument("linking_number: curve is not a simple closed loop");
  }
  Coord lo{}, hi{};
  for (int a = 0; a < 3; ++a) {
    lo[a] = verts[0].anchor[a];
    hi[a] = lo[a];
  }
  for (const Cell& v : verts.cells())
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], v.anchor[a]);
      hi[a] = std::max(hi[a], v.anchor[a]);
    }
  const CellIndex box_edges(cells_in_box(lo, hi, 3, 1));
  const CellIndex box_squares(cells_in_box(lo, hi, 3, 2));
  Vector<Rational> zb = Vector<Rational>::Zero(box_edges.size());
  for (Index i = 0; i < edges.size(); ++i) zb(*box_edges.find(edges[i])) = z(i);
  const Matrix<Rational> boundary2 = coboundary_matrix<Rational>(box_edges, box_squares, q).transpose();
  const auto f = solve(boundary2, zb);
  if (!f) throw std::logic_error("linking_number: curve bounds no 2-chain in its bounding box");
  Rational total = 0;
  for (const auto& [sq, sign] : crossed_squares(gamma))
    if (auto i = box_squares.find(sq)) total += sign * (*f)(*i);
  if (boost::multiprecision::denominator(total) != 1) throw std::logic_error("linking_number: non-integral count");
  return static_cast<long long>(boost::multiprecision::numerator(total));
}

PropertySuiteReport spanning_property_suite(const ProblemPtr& problem, int trials, std::uint64_t seed) {
  const SpanningProblem& p = *problem;
  const int n = p.grid.n();
  PropertySuiteReport rep;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  const CubicalComplex full = build_skeleton(p.grid, n);
  std::vector<Cell> box_m(full.cells(p.m).begin(), full.cells(p.m).end());
  std::vector<Cell> low_cells;
  for (int d = 0; d < p.m; ++d) low_cells.insert(low_cells.end(), full.cells(d).begin(), full.cells(d).end());

  auto note = [&](const std::string& what, const std::set<Cell>& cells) {
    if (rep.witnesses.size() >= 10) return;
    std::ostringstream os;
    os << what << ":";
    for (const Cell& c : cells) os << ' ' << describe(c, n);
    rep.witnesses.push_back(os.str());
  };

  for (int t = 0; t < trials; ++t) {
    // A random spanning X: start from the full fill and drop cells in random
    // order while spanning survives, stopping after a random number of tries.
    std::vector<Cell> order = box_m;
    std::shuffle(order.begin(), order.end(), rng);
    std::set<Cell> x(box_m.begin(), box_m.end());
    const std::size_t tries = std::uniform_int_distribution<std::size_t>(0, order.size())(rng);
    for (std::size_t i = 0; i < tries; ++i) {
      x.erase(order[i]);
      if (!none_extend(extendable_classes(p, x))) x.insert(order[i]);
    }
    if (!none_extend(extendable_classes(p, x))) continue;

    // Supersets keep spanning.
    std::set<Cell> y = x;
    std::bernoulli_distribution coin(0.3);
    for (const Cell& c : box_m)
      if (coin(rng)) y.insert(c);
    ++rep.superset_checked;
    if (!none_extend(extendable_classes(p, y))) {
      ++rep.superset_failed;
      note("superset lost spanning", y);
    }

    // Isolated lower-dimensional cells do not change the verdict.
    CubicalComplex xc = p.boundary;
    for (const Cell& c : x) xc.insert(c);
    const bool before = spans(p, xc);
    CubicalComplex aug = xc;
    std::set<Cell> added;
    if (!low_cells.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, low_cells.size() - 1);
      for (int k = 0; k < 3; ++k) {
        const Cell c = low_cells[pick(rng)];
        if (!xc.contains(c)) {
          aug.insert(c);
          added.insert(c);
        }
      }
    }
    ++rep.isolated_checked;
    if (spans(p, aug) != before) {
      ++rep.isolated_failed;
      note("isolated cells changed the verdict", added);
    }

    // Complexes of dimension <= m-2 have trivial H^{m-1}.
    if (p.m >= 2) {
      CubicalComplex k(p.grid);
      std::vector<Cell> pool;
      for (int d = 0; d <= p.m - 2; ++d) pool.insert(pool.end(), full.cells(d).begin(), full.cells(d).end());
      std::set<Cell> chosen;
      std::bernoulli_distribution take(0.25);
      for (const Cell& c : pool)
        if (take(rng)) {
          k.insert(c);
          chosen.insert(c);
        }
      const Index h = with_scalar(p.coeffs, [&](auto tag) {
        return cohomology<decltype(tag)>(k, p.m - 1, p.coeffs, true).dim();
      });
      ++rep.low_dim_checked;
      if (h != 0) {
        ++rep.low_dim_failed;
        note("low-dimensional complex with nonzero H^{m-1}", chosen);
      }
    }
  }
  return rep;
}

}  // namespace plateau

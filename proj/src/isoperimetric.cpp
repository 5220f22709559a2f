#include "plateau/diagnostics.hpp"
#include "plateau/maxflow.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace plateau {

namespace {

constexpr std::size_t kMaxIncumbents = 4096;

struct Search {
  Search(const SpanningProblem& problem, std::size_t node_budget) : p(problem), budget(node_budget) {}

  const SpanningProblem& p;
  std::size_t budget;
  std::size_t nodes = 0;
  bool aborted = false;
  bool has_best = false;
  Rational best;
  std::set<Cell> argmin;
  bool has_open = false;
  Rational open_lb;
  std::vector<std::set<Cell>> incumbents;

  bool tick() {
    if (nodes >= budget) {
      aborted = true;
      return false;
    }
    ++nodes;
    return true;
  }
  void note_open(const Rational& lb) {
    if (!has_open || lb < open_lb) open_lb = lb;
    has_open = true;
  }
  void offer(const std::set<Cell>& x, const Rational& w) {
    if (incumbents.size() < kMaxIncumbents) incumbents.push_back(x);
    if (!has_best || w < best) {
      best = w;
      argmin = x;
      has_best = true;
    }
  }
};

bool spans_cells(const SpanningProblem& p, const std::set<Cell>& cells) {
  const auto ext = extendable_classes(p, cells);
  return std::none_of(ext.begin(), ext.end(), [](bool b) { return b; });
}

IsoperimetricReport finish(Search& s, std::string method) {
  IsoperimetricReport rep;
  rep.method = std::move(method);
  rep.nodes = s.nodes;
  rep.budget = s.budget;
  rep.exact = !s.aborted;
  rep.found = s.has_best;
  rep.minimum = s.has_best ? s.best : Rational(0);
  rep.argmin = s.argmin;
  rep.incumbents = std::move(s.incumbents);
  if (rep.exact) {
    rep.lower_bound = rep.minimum;
  } else {
    Rational lb = s.has_open ? s.open_lb : Rational(0);
    if (s.has_best && s.best < lb) lb = s.best;
    rep.lower_bound = lb;
  }
  if (rep.found && !spans_cells(s.p, rep.argmin)) throw std::logic_error("isoperimetric_scan: argmin does not span");
  if (rep.exact && !s.p.classes.empty() && rep.minimum <= 0)
    throw std::logic_error("isoperimetric_scan: zero minimum with nonempty L");
  return rep;
}

IsoperimetricReport trivial_report(const std::string& method, std::size_t budget) {
  IsoperimetricReport rep;
  rep.method = method;
  rep.exact = true;
  rep.found = true;
  rep.minimum = 0;
  rep.lower_bound = 0;
  rep.budget = budget;
  rep.incumbents.emplace_back();
  return rep;
}

std::vector<Cell> free_mcells(const SpanningProblem& p) {
  const GridSpec& g = p.grid;
  Coord lo{}, hi{};
  for (int a = 0; a < g.n(); ++a) {
    lo[a] = g.lo(a);
    hi[a] = g.hi(a);
  }
  std::vector<Cell> out;
  for (const Cell& c : cells_in_box(lo, hi, g.n(), p.m))
    if (!p.boundary.contains(c)) out.push_back(c);
  return out;
}

// ---------------------------------------------------------------------------
// Branching on cells.

void cell_dfs(Search& s, const std::vector<Cell>& cells, const std::vector<Rational>& w, std::size_t i,
              std::set<Cell>& in, const Rational& weight) {
  if (s.has_best && weight >= s.best) return;
  if (!s.tick()) {
    s.note_open(weight);
    return;
  }
  if (spans_cells(s.p, in)) {
    s.offer(in, weight);
    return;
  }
  if (i == cells.size()) return;
  std::set<Cell> all = in;
  all.insert(cells.begin() + static_cast<std::ptrdiff_t>(i), cells.end());
  if (!spans_cells(s.p, all)) return;
  cell_dfs(s, cells, w, i + 1, in, weight);
  in.insert(cells[i]);
  cell_dfs(s, cells, w, i + 1, in, weight + w[i]);
  in.erase(cells[i]);
}

// ---------------------------------------------------------------------------
// Labeling in codimension one over GF(2).
//
// For X containing A, let V(X) be the classes of (m-1)-cycles of A that
// bound in X. X spans iff V(X) contains a minimal subspace Z of H_{m-1}(A)
// that pairs nontrivially with every class of L. Fix a basis v_1..v_r of Z
// and box chains F_t with boundary v_t. Every chain in the box with the same
// boundary is F_t plus the boundary of a set of cubes, so choosing X amounts
// to labeling each cube by phi in GF(2)^r (the outside is labeled 0). The
// m-cell f between cubes a and b is needed iff phi(a) + phi(b) != mu(f) with
// mu_t(f) = F_t(f).

struct LabelEdge {
  int a, b;
  std::uint32_t mu;
  std::int64_t w;
  Cell f;
};

struct Labeling {
  int nodes = 0;  // cubes plus the outside node (last)
  int r = 0;
  std::vector<LabelEdge> edges;
  std::vector<int> gauge;  // nodes fixed to label 0
};

struct LabelSearch {
  Search& s;
  const Labeling& lab;
  std::int64_t scale;

  Rational weight_of(std::int64_t cost) const { return Rational(cost) / scale; }

  std::int64_t cost(const std::vector<std::uint32_t>& phi) const {
    std::int64_t c = 0;
    for (const LabelEdge& e : lab.edges)
      if ((phi[e.a] ^ phi[e.b]) != e.mu) c += e.w;
    return c;
  }

  std::set<Cell> surface(const std::vector<std::uint32_t>& phi) const {
    std::set<Cell> x;
    for (const LabelEdge& e : lab.edges)
      if ((phi[e.a] ^ phi[e.b]) != e.mu) x.insert(e.f);
    return x;
  }

  void offer(const std::vector<std::uint32_t>& phi) {
    const std::int64_t c = cost(phi);
    if (s.has_best && weight_of(c) >= s.best) return;
    std::set<Cell> x = surface(phi);
    if (!spans_cells(s.p, x)) throw std::logic_error("labeling produced a surface that does not span");
    s.offer(x, weight_of(c));
  }

  void run(std::vector<int>& fixed, const Rational& parent_lb) {
    if (s.has_best && parent_lb >= s.best) return;
    if (!s.tick()) {
      s.note_open(parent_lb);
      return;
    }
    const int sheets = 1 << lab.r;
    const int src = lab.nodes * sheets, snk = src + 1;
    MaxFlow flow(snk + 1);
    for (const LabelEdge& e : lab.edges)
      for (int t = 0; t < sheets; ++t)
        flow.add_undirected(e.a * sheets + t, e.b * sheets + (t ^ static_cast<int>(e.mu)), e.w);
    for (int v = 0; v < lab.nodes; ++v) {
      if (fixed[v] < 0) continue;
      for (int t = 0; t < sheets; ++t) {
        if (t == fixed[v]) flow.add_edge(src, v * sheets + t, MaxFlow::kInfinity);
        else flow.add_edge(v * sheets + t, snk, MaxFlow::kInfinity);
      }
    }
    const std::int64_t cut = flow.run(src, snk);
    if (cut >= MaxFlow::kInfinity) return;
    const Rational lb = weight_of((cut + 1) / 2);
    if (s.has_best && lb >= s.best) return;
    const std::vector<bool> side = flow.source_side(src);

    std::vector<std::uint32_t> phi(static_cast<std::size_t>(lab.nodes), 0);
    int branch = -1;
    for (int v = 0; v < lab.nodes; ++v) {
      int count = 0, first = -1;
      for (int t = 0; t < sheets; ++t)
        if (side[v * sheets + t]) {
          ++count;
          if (first < 0) first = t;
        }
      phi[v] = static_cast<std::uint32_t>(first < 0 ? 0 : first);
      if (count != 1 && branch < 0) branch = v;
    }
    if (branch < 0) {
      if (cut % 2 != 0 || cost(phi) * 2 != cut) throw std::logic_error("labeling: section cut mismatch");
      offer(phi);
      return;
    }
    offer(phi);
    std::vector<int> order{static_cast<int>(phi[branch])};
    for (int t = 0; t < sheets; ++t)
      if (t != order[0]) order.push_back(t);
    for (int t : order) {
      fixed[branch] = t;
      run(fixed, lb);
    }
    fixed[branch] = -1;
  }
};

// Minimal subspaces of GF(2)^h (as membership bitmasks over the 2^h
// vectors) containing, for each row of P, a vector with odd pairing.
std::vector<std::vector<std::uint32_t>> minimal_covering_bases(const std::vector<std::uint32_t>& pairing_rows, int h) {
  const std::uint32_t total = 1u << h;
  std::vector<std::uint64_t> subspaces{1};  // {0}
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    const std::uint64_t sub = subspaces[i];
    for (std::uint32_t v = 1; v < total; ++v) {
      if ((sub >> v) & 1u) continue;
      std::uint64_t grown = sub;
      for (std::uint32_t u = 0; u < total; ++u)
        if ((sub >> u) & 1u) grown |= std::uint64_t{1} << (u ^ v);
      if (std::find(subspaces.begin(), subspaces.end(), grown) == subspaces.end()) subspaces.push_back(grown);
    }
  }
  auto covers = [&](std::uint64_t sub) {
    for (std::uint32_t row : pairing_rows) {
      bool hit = false;
      for (std::uint32_t v = 0; v < total && !hit; ++v)
        if (((sub >> v) & 1u) && (std::popcount(row & v) & 1)) hit = true;
      if (!hit) return false;
    }
    return true;
  };
  std::vector<std::uint64_t> covering;
  for (std::uint64_t sub : subspaces)
    if (covers(sub)) covering.push_back(sub);
  std::vector<std::uint64_t> minimal;
  for (std::uint64_t a : covering) {
    bool is_min = true;
    for (std::uint64_t b : covering)
      if (b != a && (b & a) == b) is_min = false;
    if (is_min) minimal.push_back(a);
  }
  std::sort(minimal.begin(), minimal.end(), [](std::uint64_t a, std::uint64_t b) {
    if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
    return a < b;
  });
  std::vector<std::vector<std::uint32_t>> bases;
  for (std::uint64_t sub : minimal) {
    std::vector<std::uint32_t> basis;
    std::uint64_t spanned = 1;
    for (std::uint32_t v = 1; v < total; ++v) {
      if (!((sub >> v) & 1u) || ((spanned >> v) & 1u)) continue;
      basis.push_back(v);
      std::uint64_t grown = spanned;
      for (std::uint32_t u = 0; u < total; ++u)
        if ((spanned >> u) & 1u) grown |= std::uint64_t{1} << (u ^ v);
      spanned = grown;
    }
    bases.push_back(std::move(basis));
  }
  return bases;
}

IsoperimetricReport labeling_scan(const ProblemPtr& problem, std::size_t budget) {
  const SpanningProblem& p = *problem;
  const GridSpec& g = p.grid;
  const int n = g.n(), m = p.m;
  const Coeffs gf2 = Coeffs::gf2();
  Search s(p, budget);

  // Homology basis of A in degree m-1 and its pairing with L.
  CochainComplex<Gf2> ca(p.boundary, gf2);
  const CellIndex& a_faces = ca.cells(m - 1);
  const Subspace<Gf2> cycles = kernel_basis(Matrix<Gf2>(ca.delta(m - 2, false).transpose()));
  Subspace<Gf2> acc = Subspace<Gf2>::span(ca.delta(m - 1, false));
  std::vector<Vector<Gf2>> basis;
  for (Index i = 0; i < cycles.dim(); ++i) {
    Vector<Gf2> z = cycles.basis().row(i).transpose();
    if (acc.contains(z)) continue;
    basis.push_back(z);
    Matrix<Gf2> row(1, z.size());
    row.row(0) = z.transpose();
    acc = acc + Subspace<Gf2>::span(row);
  }
  const int h = static_cast<int>(basis.size());
  if (h > 5) throw std::invalid_argument("labeling: H_{m-1}(A) too large");
  std::vector<std::uint32_t> pairing(p.classes.size(), 0);
  for (std::size_t i = 0; i < p.classes.size(); ++i) {
    const Vector<Gf2> l = to_vector<Gf2>(p.classes[i].rep, a_faces, gf2);
    for (int j = 0; j < h; ++j) {
      int dot = 0;
      for (Index k = 0; k < l.size(); ++k) dot ^= l(k).v & basis[j](k).v;
      if (dot) pairing[i] |= 1u << j;
    }
  }

  // Box chains bounded by the basis cycles.
  Coord lo{}, hi{};
  for (int a = 0; a < n; ++a) {
    lo[a] = g.lo(a);
    hi[a] = g.hi(a);
  }
  const CellIndex box_faces(cells_in_box(lo, hi, n, m - 1));
  const CellIndex box_cells(cells_in_box(lo, hi, n, m));
  const Matrix<Gf2> boundary = coboundary_matrix<Gf2>(box_faces, box_cells, gf2).transpose();
  std::vector<Vector<Gf2>> chains;
  for (const Vector<Gf2>& z : basis) {
    Vector<Gf2> zb = Vector<Gf2>::Zero(box_faces.size());
    for (Index k = 0; k < z.size(); ++k)
      if (z(k).v) zb(*box_faces.find(a_faces[k])) = Gf2(1);
    auto f = solve(boundary, zb);
    if (!f) throw std::logic_error("labeling: a cycle of A bounds no chain in the box");
    chains.push_back(std::move(*f));
  }

  // Dual graph: cubes plus the outside node.
  const CellIndex cubes(cells_in_box(lo, hi, n, n));
  const int outside = static_cast<int>(cubes.size());
  std::vector<Rational> weights;
  struct Raw {
    int a, b;
    Index col;
  };
  std::vector<Raw> raw;
  for (Index k = 0; k < box_cells.size(); ++k) {
    const Cell& f = box_cells[k];
    if (p.boundary.contains(f)) continue;
    int axis = 0;
    while (f.is_free(axis)) ++axis;
    Cell up = f;
    up.axes = static_cast<std::uint8_t>(f.axes | (1u << axis));
    Cell down = up;
    --down.anchor[axis];
    const auto iu = cubes.find(up), id = cubes.find(down);
    raw.push_back({iu ? static_cast<int>(*iu) : outside, id ? static_cast<int>(*id) : outside, k});
    weights.push_back(cell_weight(p, f));
  }
  BigInt scale_big = 1;
  for (const Rational& w : weights) {
    const BigInt d = boost::multiprecision::denominator(w);
    scale_big = scale_big / boost::multiprecision::gcd(scale_big, d) * d;
  }
  BigInt total = 0;
  for (const Rational& w : weights) total += boost::multiprecision::numerator(w) * (scale_big / boost::multiprecision::denominator(w));
  if (total * 4 * (1 << 5) >= BigInt(MaxFlow::kInfinity)) throw std::invalid_argument("labeling: weights too large");
  const auto scale = scale_big.convert_to<std::int64_t>();

  // Gauge: components of the dual graph that miss the outside node.
  std::vector<int> parent(static_cast<std::size_t>(outside + 1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Raw& e : raw) {
    const int x = find(e.a), y = find(e.b);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  std::vector<int> gauge{outside};
  std::vector<bool> seen_root(static_cast<std::size_t>(outside + 1), false);
  seen_root[find(outside)] = true;
  for (int v = 0; v < outside; ++v) {
    const int root = find(v);
    if (seen_root[root]) continue;
    seen_root[root] = true;
    gauge.push_back(v);
  }

  for (const auto& zbasis : minimal_covering_bases(pairing, h)) {
    Labeling lab;
    lab.nodes = outside + 1;
    lab.r = static_cast<int>(zbasis.size());
    lab.gauge = gauge;
    for (std::size_t e = 0; e < raw.size(); ++e) {
      std::uint32_t mu = 0;
      for (int t = 0; t < lab.r; ++t) {
        int bit = 0;
        for (int j = 0; j < h; ++j)
          if ((zbasis[t] >> j) & 1u) bit ^= chains[j](raw[e].col).v;
        if (bit) mu |= 1u << t;
      }
      const Rational& w = weights[e];
      const auto wi = (boost::multiprecision::numerator(w) * (scale_big / boost::multiprecision::denominator(w)))
                          .convert_to<std::int64_t>();
      lab.edges.push_back({raw[e].a, raw[e].b, mu, wi, box_cells[raw[e].col]});
    }
    std::vector<int> fixed(static_cast<std::size_t>(lab.nodes), -1);
    for (int v : gauge) fixed[v] = 0;
    LabelSearch ls{s, lab, scale};
    ls.run(fixed, Rational(0));
  }
  return finish(s, "labeling");
}

}  // namespace

IsoperimetricReport isoperimetric_scan_cells(const ProblemPtr& problem, std::size_t budget) {
  const SpanningProblem& p = *problem;
  if (p.classes.empty()) return trivial_report("cells", budget);
  Search s(p, budget);
  std::vector<Cell> cells = free_mcells(p);
  std::vector<std::pair<Rational, Cell>> order;
  for (const Cell& c : cells) order.emplace_back(cell_weight(p, c), c);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Rational> w;
  cells.clear();
  for (auto& [wt, c] : order) {
    w.push_back(wt);
    cells.push_back(c);
  }
  std::set<Cell> in;
  cell_dfs(s, cells, w, 0, in, Rational(0));
  return finish(s, "cells");
}

IsoperimetricReport isoperimetric_scan(const ProblemPtr& problem, std::size_t budget) {
  const SpanningProblem& p = *problem;
  if (p.classes.empty()) return trivial_report(p.m + 1 == p.grid.n() ? "labeling" : "cells", budget);
  if (p.m + 1 == p.grid.n() && p.coeffs.kind == Coeffs::Kind::GF2) return labeling_scan(problem, budget);
  return isoperimetric_scan_cells(problem, budget);
}

}  // namespace plateau

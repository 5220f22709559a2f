#include "plateau/deformation.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace plateau {

namespace {

int upper_end(const Cell& c, int axis) { return c.anchor[axis] + (c.is_free(axis) ? 1 : 0); }

bool boxes_meet(const Cell& c, const Subbox& r, int n) {
  for (int a = 0; a < n; ++a)
    if (upper_end(c, a) < r.lo[a] || c.anchor[a] > r.hi[a]) return false;
  return true;
}

void check_in_grid(const Subbox& r, const GridSpec& g) {
  for (int a = 0; a < g.n(); ++a)
    if (r.lo[a] < g.lo(a) || r.hi[a] > g.hi(a) || r.lo[a] >= r.hi[a])
      throw std::invalid_argument("subbox " + describe(r, g.n()) + " is not a nonempty box inside the grid");
}

void check_a_avoids_open(const SpanningProblem& p, const Subbox& r) {
  p.boundary.for_each_cell([&](const Cell& c) {
    if (in_open_box(c, r, p.grid.n()))
      throw std::invalid_argument("subbox " + describe(r, p.grid.n()) + " meets A in its interior");
  });
}

// X intersected with the closed box, as a complex.
CubicalComplex trace_in_box(const Surface& x, const Subbox& r) {
  const SpanningProblem& p = x.problem();
  const int n = p.grid.n();
  CubicalComplex out(p.grid);
  p.boundary.for_each_cell([&](const Cell& c) {
    if (in_closed_box(c, r, n)) out.insert(c);
  });
  for (const Cell& c : x.mcells()) {
    if (!boxes_meet(c, r, n)) continue;
    for (const Cell& f : closure_of(c))
      if (in_closed_box(f, r, n)) out.insert(f);
  }
  return out;
}

CubicalComplex frontier_part(const CubicalComplex& xin, const Subbox& r) {
  CubicalComplex t(xin.grid());
  xin.for_each_cell([&](const Cell& c) {
    if (!in_open_box(c, r, xin.grid().n())) t.insert(c);
  });
  return t;
}

Rational sum_weights(const SpanningProblem& p, const std::set<Cell>& cells) {
  Rational w = 0;
  for (const Cell& c : cells) w += cell_weight(p, c);
  return w;
}

Coord shifted(const Coord& c, int by, int n) {
  Coord out = c;
  for (int a = 0; a < n; ++a) out[a] += by;
  return out;
}

// Squared distance from the barycenter of c to the nearest barycenter of a
// cell of A (doubled coordinates, so exact integers); 0 when A is empty.
Rational distance_sq_to(const CubicalComplex& a, const Cell& c, int n) {
  long long best = -1;
  a.for_each_cell([&](const Cell& b) {
    long long d = 0;
    for (int i = 0; i < n; ++i) {
      const long long diff = c.doubled_center(i) - b.doubled_center(i);
      d += diff * diff;
    }
    if (best < 0 || d < best) best = d;
  });
  return best < 0 ? Rational(0) : Rational(best, 4);
}

}  // namespace

void SolverConfig::validate() const {
  if (local_box_side < 1 || local_box_side > 2) throw std::invalid_argument("solver: local_box_side must be 1 or 2");
  if (max_passes < 1) throw std::invalid_argument("solver: max_passes must be positive");
  if (max_local_cells < 0 || max_local_cells > 24) throw std::invalid_argument("solver: max_local_cells must lie in [0, 24]");
}

std::string to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Remove: return "remove";
    case MoveKind::LocalReplace: return "local_replace";
    case MoveKind::SkeletonPush: return "skeleton_push";
  }
  return "?";
}

Rational cell_weight(const SpanningProblem& p, const Cell& c) {
  return p.density.at(c, p.grid) * cell_measure(c, p.grid);
}

Rational surface_weight(const Surface& x) { return sum_weights(x.problem(), x.mcells()); }

Rational surface_measure(const Surface& x) {
  const SpanningProblem& p = x.problem();
  Rational unit = 1;
  for (int i = 0; i < p.m; ++i) unit *= p.grid.side();
  return unit * static_cast<long long>(x.mcells().size());
}

Surface initial_fill(const ProblemPtr& problem) {
  const CubicalComplex skel = build_skeleton(problem->grid, problem->m);
  Surface x(problem, skel.cells(problem->m));
  if (!spans(x)) throw std::logic_error("initial_fill: the full m-skeleton does not span; L is inconsistent");
  return x;
}

std::pair<Surface, SolveReport> greedy_minimize(const Surface& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (!spans(x0)) throw std::invalid_argument("greedy_minimize: initial surface does not span");
  const auto t0 = std::chrono::steady_clock::now();
  const SpanningProblem& p = x0.problem();
  SolveReport rep;
  rep.initial_weight = surface_weight(x0);
  std::vector<std::pair<Rational, Cell>> order;
  for (const Cell& c : x0.mcells()) order.emplace_back(cell_weight(p, c), c);
  if (cfg.removal_order == RemovalOrder::HeaviestFirst) {
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  } else if (cfg.removal_order == RemovalOrder::FarthestFirst) {
    std::map<Cell, Rational> dist;
    for (const auto& [w, c] : order) dist[c] = distance_sq_to(p.boundary, c, p.grid.n());
    std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      const Rational& da = dist[a.second];
      const Rational& db = dist[b.second];
      if (da != db) return da > db;
      return a.first > b.first;
    });
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  Surface x = x0;
  for (const auto& [w, c] : order) {
    x.remove(c);
    if (spans(x)) {
      rep.moves.push_back({MoveKind::Remove, -w, describe(c, p.grid.n())});
    } else {
      x.add(c);
    }
  }
  rep.final_weight = surface_weight(x);
  rep.spans_verified = spans(x);
  rep.one_minimal = true;
  rep.passes = 1;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(x), std::move(rep)};
}

bool is_one_minimal(const Surface& x) {
  Surface y = x;
  for (const Cell& c : x.mcells()) {
    y.remove(c);
    const bool still = spans(y);
    y.add(c);
    if (still) return false;
  }
  return true;
}

std::string describe(const Subbox& r, int n) {
  std::ostringstream os;
  os << '[';
  for (int a = 0; a < n; ++a) os << (a ? "," : "") << r.lo[a];
  os << "]-[";
  for (int a = 0; a < n; ++a) os << (a ? "," : "") << r.hi[a];
  os << ']';
  return os.str();
}

bool in_open_box(const Cell& c, const Subbox& r, int n) {
  for (int a = 0; a < n; ++a) {
    if (c.is_free(a)) {
      if (c.anchor[a] < r.lo[a] || c.anchor[a] + 1 > r.hi[a]) return false;
    } else if (c.anchor[a] <= r.lo[a] || c.anchor[a] >= r.hi[a]) {
      return false;
    }
  }
  return true;
}

bool in_closed_box(const Cell& c, const Subbox& r, int n) {
  for (int a = 0; a < n; ++a)
    if (c.anchor[a] < r.lo[a] || upper_end(c, a) > r.hi[a]) return false;
  return true;
}

std::vector<Subbox> admissible_subboxes(const SpanningProblem& p, int side) {
  const GridSpec& g = p.grid;
  const int n = g.n();
  Coord ext{};
  Coord lo{};
  for (int a = 0; a < n; ++a) {
    ext[a] = std::min(side, g.extent(a));
    lo[a] = g.lo(a);
  }
  std::vector<Subbox> out;
  while (true) {
    Subbox r;
    r.lo = lo;
    for (int a = 0; a < n; ++a) r.hi[a] = lo[a] + ext[a];
    bool ok = true;
    p.boundary.for_each_cell([&](const Cell& c) {
      if (ok && in_open_box(c, r, n)) ok = false;
    });
    if (ok) out.push_back(r);
    int a = 0;
    for (; a < n; ++a) {
      if (lo[a] + ext[a] < g.hi(a)) {
        ++lo[a];
        break;
      }
      lo[a] = g.lo(a);
    }
    if (a == n) break;
  }
  return out;
}

ReplaceResult local_replace(const Surface& x, const Subbox& r, int max_local_cells) {
  const SpanningProblem& p = x.problem();
  const int n = p.grid.n();
  const int m = p.m;
  check_in_grid(r, p.grid);
  check_a_avoids_open(p, r);
  ReplaceResult out;
  out.surface = x;
  out.delta = 0;

  std::vector<Cell> slots;
  for (const Cell& c : cells_in_box(r.lo, r.hi, n, m))
    if (in_open_box(c, r, n)) slots.push_back(c);
  std::set<Cell> current;
  for (const Cell& c : slots)
    if (x.has(c)) current.insert(c);
  if (current.empty()) return out;
  if (static_cast<int>(slots.size()) > max_local_cells) {
    out.skipped = true;
    return out;
  }

  const CubicalComplex xin = trace_in_box(x, r);
  const CubicalComplex t = frontier_part(xin, r);
  const Rational current_weight = sum_weights(p, current);

  const std::size_t k = slots.size();
  std::vector<Rational> w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = cell_weight(p, slots[i]);
  // Faces of each slot on the frontier must already be in T.
  std::vector<bool> slot_ok(k, true);
  for (std::size_t i = 0; i < k; ++i)
    for (const Cell& f : closure_of(slots[i]))
      if (!in_open_box(f, r, n) && !t.contains(f)) slot_ok[i] = false;

  std::vector<std::pair<Rational, std::uint32_t>> masks;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    Rational total = 0;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i)
      if ((mask >> i) & 1u) {
        ok = slot_ok[i];
        total += w[i];
      }
    if (ok && total < current_weight) masks.emplace_back(total, mask);
  }
  std::stable_sort(masks.begin(), masks.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (masks.empty()) return out;

  std::optional<std::uint32_t> accepted;
  with_scalar(p.coeffs, [&](auto tag) {
    using S = decltype(tag);
    const RestrictionImage<S> ri_x = restriction_image<S>(xin, t, m - 1, p.coeffs);
    const Subspace<S> target = ri_x.image + ri_x.coboundaries;
    for (const auto& [total, mask] : masks) {
      CubicalComplex y = t;
      for (std::size_t i = 0; i < k; ++i)
        if ((mask >> i) & 1u) y.insert(slots[i]);
      ++out.candidates_checked;
      if (target.contains(restriction_image<S>(y, t, m - 1, p.coeffs).image)) {
        accepted = mask;
        return;
      }
    }
  });
  if (!accepted) return out;

  Surface next = x;
  for (const Cell& c : current) next.remove(c);
  for (std::size_t i = 0; i < k; ++i)
    if ((*accepted >> i) & 1u) next.add(slots[i]);
  if (!spans(next)) throw std::logic_error("local_replace: replacement in " + describe(r, n) + " lost spanning");
  out.delta = surface_weight(next) - surface_weight(x);
  out.surface = std::move(next);
  out.changed = true;
  return out;
}

std::pair<Surface, PushReport> skeleton_push(const Surface& x, const Coord& q_lo) {
  const SpanningProblem& p = x.problem();
  const int n = p.grid.n();
  const int m = p.m;
  const Subbox q{q_lo, shifted(q_lo, 2, n)};
  check_in_grid(q, p.grid);
  check_a_avoids_open(p, q);
  const Coord center = shifted(q_lo, 1, n);

  PushReport rep;
  std::vector<Cell> interior;
  for (const Cell& c : x.mcells())
    if (in_open_box(c, q, n)) interior.push_back(c);
  rep.interior_cells = interior.size();
  Rational unit = 1;
  for (int i = 0; i < m; ++i) unit *= p.grid.side();
  if (interior.empty()) return {x, rep};

  std::set<Cell> image;
  for (const Cell& b : cells_in_box(q.lo, q.hi, n, m)) {
    if (in_open_box(b, q, n)) continue;
    for (const Cell& c : interior) {
      bool meets = true;
      for (int a = 0; a < n && meets; ++a) {
        const int lo = b.anchor[a], hi = upper_end(b, a), pc = center[a];
        if (!c.is_free(a)) {
          meets = lo <= pc && pc <= hi;
        } else if (c.anchor[a] == pc) {
          meets = hi >= pc;
        } else {
          meets = lo <= pc;
        }
      }
      if (meets) {
        image.insert(b);
        break;
      }
    }
  }
  rep.pushed_cells = image.size();
  rep.interior_measure = unit * static_cast<long long>(interior.size());
  rep.pushed_measure = unit * static_cast<long long>(image.size());
  Rational factor = 1;
  for (int i = 0; i < m; ++i) factor *= 4 * n;
  rep.bound = factor * rep.interior_measure;
  if (rep.pushed_measure > rep.bound) throw std::logic_error("skeleton_push: pushed measure exceeds (4n)^m bound");

  Surface next = x;
  for (const Cell& c : interior) next.remove(c);
  for (const Cell& b : image) next.add(b);

  const CubicalComplex xin = trace_in_box(x, q);
  const CubicalComplex t = frontier_part(xin, q);
  CubicalComplex y = t;
  for (const Cell& b : image) y.insert(b);
  rep.dominated = relative_coboundary_dominates(y, xin, t, m - 1, p.coeffs);
  rep.spans_after = spans(next);
  if (!rep.dominated || !rep.spans_after) {
    rep.rolled_back = true;
    return {x, rep};
  }
  rep.applied = true;
  return {std::move(next), rep};
}

std::string to_string(RemovalOrder o) {
  switch (o) {
    case RemovalOrder::HeaviestFirst: return "heaviest";
    case RemovalOrder::FarthestFirst: return "farthest";
    case RemovalOrder::Random: return "random";
  }
  return "?";
}

RemovalOrder parse_removal_order(const std::string& s) {
  if (s == "heaviest") return RemovalOrder::HeaviestFirst;
  if (s == "farthest") return RemovalOrder::FarthestFirst;
  if (s == "random") return RemovalOrder::Random;
  throw std::invalid_argument("unknown removal order: " + s);
}

namespace {

std::pair<Surface, SolveReport> descend(const ProblemPtr& problem, const SolverConfig& cfg,
                                        const std::vector<Subbox>& boxes) {
  const int n = problem->grid.n();
  SolveReport rep;
  rep.chosen_order = cfg.removal_order;
  Surface x = initial_fill(problem);
  rep.initial_weight = surface_weight(x);

  auto greedy = [&]() {
    auto [y, g] = greedy_minimize(x, cfg);
    x = std::move(y);
    rep.moves.insert(rep.moves.end(), g.moves.begin(), g.moves.end());
  };
  greedy();
  for (int pass = 1; pass <= cfg.max_passes; ++pass) {
    rep.passes = pass;
    bool improved = false;
    for (const Subbox& r : boxes) {
      ReplaceResult rr = local_replace(x, r, cfg.max_local_cells);
      ++rep.subboxes_visited;
      if (rr.skipped) ++rep.subboxes_skipped;
      if (!rr.changed) continue;
      rep.moves.push_back({MoveKind::LocalReplace, rr.delta, describe(r, n)});
      x = std::move(rr.surface);
      improved = true;
    }
    if (!improved) break;
    greedy();
  }
  rep.final_weight = surface_weight(x);
  return {std::move(x), std::move(rep)};
}

}  // namespace

std::pair<Surface, SolveReport> solve(const ProblemPtr& problem, const SolverConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Subbox> boxes = admissible_subboxes(*problem, cfg.local_box_side);
  auto [x, rep] = descend(problem, cfg, boxes);
  rep.start_weights.push_back(rep.final_weight);
  if (cfg.multi_start && cfg.removal_order != RemovalOrder::FarthestFirst) {
    SolverConfig alt = cfg;
    alt.removal_order = RemovalOrder::FarthestFirst;
    auto [y, alt_rep] = descend(problem, alt, boxes);
    const Rational w = alt_rep.final_weight;
    if (w < rep.final_weight) {
      alt_rep.start_weights = rep.start_weights;
      alt_rep.subboxes_visited += rep.subboxes_visited;
      alt_rep.subboxes_skipped += rep.subboxes_skipped;
      x = std::move(y);
      rep = std::move(alt_rep);
    } else {
      rep.subboxes_visited += alt_rep.subboxes_visited;
      rep.subboxes_skipped += alt_rep.subboxes_skipped;
    }
    rep.start_weights.push_back(w);
  }
  rep.spans_verified = spans(x);
  rep.one_minimal = is_one_minimal(x);
  if (!rep.spans_verified || !rep.one_minimal) throw std::logic_error("solve: result is not a 1-minimal spanning surface");
  if (rep.final_weight > rep.initial_weight) throw std::logic_error("solve: weight increased");
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(x), std::move(rep)};
}

}  // namespace plateau

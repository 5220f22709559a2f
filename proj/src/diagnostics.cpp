#include "plateau/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace plateau {

namespace {

Rational power(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Point in doubled lattice units: 2 p / side.
Point doubled(const Point& p, const GridSpec& g) {
  Point out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = 2 * p[i] / g.side();
  return out;
}

Rational doubled_distance_sq(const Cell& c, const Point& pd, int n) {
  Rational d = 0;
  for (int a = 0; a < n; ++a) {
    const Rational diff = Rational(c.doubled_center(a)) - pd[a];
    d += diff * diff;
  }
  return d;
}

std::vector<Cell> all_mcells(const Surface& x) {
  std::vector<Cell> out(x.mcells().begin(), x.mcells().end());
  const auto& am = x.problem().boundary.cells(x.problem().m);
  out.insert(out.end(), am.begin(), am.end());
  return out;
}

bool on_surface(const Surface& x, const Point& p) {
  const SpanningProblem& pr = x.problem();
  for (const Cell& c : x.mcells())
    if (cell_contains_point(c, p, pr.grid)) return true;
  bool hit = false;
  pr.boundary.for_each_cell([&](const Cell& c) {
    if (!hit && cell_contains_point(c, p, pr.grid)) hit = true;
  });
  return hit;
}

// Weighted (or unweighted) measure of the m-cells of X with barycenter
// within r of p.
Rational ball_measure(const Surface& x, const std::vector<Cell>& cells, const Point& p, const Rational& r,
                      bool weighted) {
  const SpanningProblem& pr = x.problem();
  const Point pd = doubled(p, pr.grid);
  const Rational rd = 2 * r / pr.grid.side();
  const Rational rd_sq = rd * rd;
  Rational total = 0;
  for (const Cell& c : cells)
    if (doubled_distance_sq(c, pd, pr.grid.n()) <= rd_sq)
      total += weighted ? cell_weight(pr, c) : cell_measure(c, pr.grid);
  return total;
}

void check_point(const Point& p, int n) {
  if (static_cast<int>(p.size()) != n) throw std::invalid_argument("point has the wrong dimension");
}

}  // namespace

Rational unit_ball_volume(int m) {
  if (m < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
  const Rational pi(355, 113);
  Rational v = (m % 2 == 0) ? Rational(1) : Rational(2);
  for (int k = (m % 2 == 0) ? 2 : 3; k <= m; k += 2) v = v * 2 * pi / k;
  return v;
}

bool cell_contains_point(const Cell& c, const Point& p, const GridSpec& g) {
  const Rational s = g.side();
  for (int a = 0; a < g.n(); ++a) {
    const Rational lo = c.anchor[a] * s;
    const Rational hi = (c.anchor[a] + (c.is_free(a) ? 1 : 0)) * s;
    if (p[a] < lo || p[a] > hi) return false;
  }
  return true;
}

SliceReport slicing_check(const Surface& x, const Point& center, const Rational& width) {
  const SpanningProblem& pr = x.problem();
  const GridSpec& g = pr.grid;
  const int n = g.n();
  check_point(center, n);
  if (width < g.side()) throw std::invalid_argument("slicing_check: shell width below the cell side");
  SliceReport rep;
  rep.center = center;
  rep.width = width;
  rep.lhs = 0;
  rep.rhs = 0;
  rep.crossing_lhs = 0;
  const Rational s = g.side();
  const Rational face = power(s, pr.m - 1);
  const Rational cell = power(s, pr.m);

  struct Span {
    Rational min_sq, max_sq, bary_sq, f;
  };
  std::vector<Span> spans;
  Rational far_sq = 0;
  for (const Cell& c : x.mcells()) {
    Span sp{0, 0, 0, pr.density.at(c, g)};
    for (int a = 0; a < n; ++a) {
      const Rational lo = c.anchor[a] * s;
      const Rational hi = (c.anchor[a] + (c.is_free(a) ? 1 : 0)) * s;
      Rational near = 0;
      if (center[a] < lo) near = lo - center[a];
      if (center[a] > hi) near = center[a] - hi;
      sp.min_sq += near * near;
      sp.max_sq += std::max((center[a] - lo) * (center[a] - lo), (center[a] - hi) * (center[a] - hi));
      const Rational mid = (lo + hi) / 2 - center[a];
      sp.bary_sq += mid * mid;
    }
    far_sq = std::max(far_sq, sp.max_sq);
    rep.rhs += sp.f * cell;
    spans.push_back(std::move(sp));
  }
  for (int k = 0;; ++k) {
    const Rational lo = k * width, hi = (k + 1) * width;
    if (spans.empty() || lo * lo > far_sq) break;
    const Rational t = (lo + hi) / 2;
    Rational band = 0, crossing = 0;
    for (const Span& sp : spans) {
      if (lo * lo <= sp.bary_sq && sp.bary_sq < hi * hi) band += sp.f * cell;
      if (sp.min_sq <= t * t && t * t <= sp.max_sq) crossing += sp.f * face;
    }
    rep.radii.push_back(t);
    rep.slices.push_back(band / width);
    rep.crossing_slices.push_back(crossing);
    rep.lhs += band;
    rep.crossing_lhs += crossing * width;
  }
  if (rep.rhs > 0) {
    rep.ratio = to_double(rep.lhs / rep.rhs);
    rep.crossing_ratio = to_double(rep.crossing_lhs / rep.rhs);
    rep.within_slack = rep.lhs * rep.lhs <= n * rep.rhs * rep.rhs && n * rep.lhs * rep.lhs >= rep.rhs * rep.rhs;
  }
  return rep;
}

DensityProfile density_profile(const Surface& x, const Point& p, const std::vector<Rational>& radii) {
  const SpanningProblem& pr = x.problem();
  check_point(p, pr.grid.n());
  if (!on_surface(x, p)) throw std::invalid_argument("density_profile: point is not on X");
  DensityProfile d;
  d.center = p;
  d.radii = radii;
  const std::vector<Cell> cells = all_mcells(x);
  const Rational alpha = unit_ball_volume(pr.m);
  Rational prev = -1;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= 0 || (i > 0 && radii[i] <= radii[i - 1]))
      throw std::invalid_argument("density_profile: radii must be positive and increasing");
    const Rational gi = ball_measure(x, cells, p, radii[i], true);
    if (gi < prev) throw std::logic_error("density_profile: g decreased");
    prev = gi;
    d.g.push_back(gi);
    d.ratios.push_back(to_double(gi / (alpha * power(radii[i], pr.m))));
  }
  d.lower_density = d.ratios.empty() ? 0 : *std::min_element(d.ratios.begin(), d.ratios.end());
  return d;
}

RegularityReport regularity_constant(const Surface& x, const std::vector<Rational>& radii) {
  const SpanningProblem& pr = x.problem();
  const GridSpec& g = pr.grid;
  const int n = g.n();
  if (radii.empty()) throw std::invalid_argument("regularity_constant: no radii");
  std::set<Point> pts;
  for (const Cell& c : x.mcells()) {
    for (const Cell& f : closure_of(c)) {
      if (f.dim() != 0 || pr.boundary.contains(f)) continue;
      Point p(static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a) p[a] = f.anchor[a] * g.side();
      pts.insert(std::move(p));
    }
    pts.insert(barycenter(c, g));
  }
  if (pts.empty()) throw std::invalid_argument("regularity_constant: X \\ A is empty");
  const std::vector<Cell> cells = all_mcells(x);
  RegularityReport rep;
  rep.points = pts.size();
  rep.radius_max = *std::max_element(radii.begin(), radii.end());
  bool first = true;
  for (const Point& p : pts)
    for (const Rational& r : radii) {
      if (r <= 0) throw std::invalid_argument("regularity_constant: radii must be positive");
      const Rational v = ball_measure(x, cells, p, r, false) / power(r, pr.m);
      ++rep.samples;
      if (first || v < rep.c_hat) {
        rep.c_hat = v;
        rep.worst_point = p;
        rep.worst_radius = r;
        first = false;
      }
    }
  return rep;
}

MonotonicityReport monotonicity_check(const Surface& x, const Point& p,
                                      const std::vector<std::pair<Rational, Rational>>& pairs,
                                      double warn_threshold) {
  const SpanningProblem& pr = x.problem();
  check_point(p, pr.grid.n());
  const std::vector<Cell> cells = all_mcells(x);
  MonotonicityReport rep;
  rep.center = p;
  bool any = false;
  for (const auto& [r, s] : pairs) {
    if (s <= 0 || s > r) throw std::invalid_argument("monotonicity_check: pairs need 0 < s <= r");
    const Rational gs = ball_measure(x, cells, p, s, true);
    if (gs == 0) continue;
    const Rational gr = ball_measure(x, cells, p, r, true);
    const double ratio = to_double((gr / power(r, pr.m)) / (gs / power(s, pr.m)));
    rep.pairs.emplace_back(r, s);
    rep.ratios.push_back(ratio);
    const double k = std::pow(ratio, 1.0 / to_double(r));
    if (!any || ratio < rep.min_ratio) rep.min_ratio = ratio;
    if (!any || k < rep.k_hat) rep.k_hat = k;
    any = true;
  }
  rep.warn = any && rep.min_ratio < warn_threshold;
  return rep;
}

void write_slices_csv(std::ostream& os, const SliceReport& r) {
  os << "radius,slice,crossing_slice\n";
  for (std::size_t i = 0; i < r.radii.size(); ++i)
    os << to_string(r.radii[i]) << ',' << to_string(r.slices[i]) << ',' << to_string(r.crossing_slices[i]) << '\n';
}

void write_profile_csv(std::ostream& os, const DensityProfile& d) {
  os << "radius,g,ratio\n";
  for (std::size_t i = 0; i < d.radii.size(); ++i)
    os << to_string(d.radii[i]) << ',' << to_string(d.g[i]) << ',' << d.ratios[i] << '\n';
}

}  // namespace plateau

#include "plateau/lattice.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace plateau {

GridSpec::GridSpec(int n, int level, std::vector<int> lo, std::vector<int> hi) : n_(n), level_(level) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("GridSpec: ambient dimension must be in [1, 6], got " + std::to_string(n));
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
    throw std::invalid_argument("GridSpec: corner vectors must have length n");
  for (int a = 0; a < n; ++a) {
    if (lo[a] >= hi[a]) throw std::invalid_argument("GridSpec: empty extent on axis " + std::to_string(a));
    lo_[a] = lo[a];
    hi_[a] = hi[a];
  }
}

GridSpec GridSpec::box(std::vector<int> extents, int level) {
  const int n = static_cast<int>(extents.size());
  std::vector<int> lo(extents.size(), 0);
  return GridSpec(n, level, std::move(lo), std::move(extents));
}

bool GridSpec::contains(const Cell& c) const {
  if (c.axes >> n_) return false;
  for (int a = 0; a < n_; ++a) {
    const int top = c.anchor[a] + (c.is_free(a) ? 1 : 0);
    if (c.anchor[a] < lo_[a] || top > hi_[a]) return false;
  }
  for (int a = n_; a < kMaxDim; ++a)
    if (c.anchor[a] != 0) return false;
  return true;
}

bool GridSpec::contains_point(const Coord& v) const {
  for (int a = 0; a < n_; ++a)
    if (v[a] < lo_[a] || v[a] > hi_[a]) return false;
  return true;
}

std::vector<Cell> faces(const Cell& cell) {
  std::vector<Cell> out;
  out.reserve(2 * static_cast<std::size_t>(cell.dim()));
  for (int a = 0; a < kMaxDim; ++a) {
    if (!cell.is_free(a)) continue;
    Cell lower = cell;
    lower.axes = static_cast<std::uint8_t>(cell.axes & ~(1u << a));
    Cell upper = lower;
    upper.anchor[a] += 1;
    out.push_back(lower);
    out.push_back(upper);
  }
  return out;
}

std::vector<std::pair<Cell, int>> oriented_faces(const Cell& cell) {
  std::vector<std::pair<Cell, int>> out;
  int t = 0;
  for (int a = 0; a < kMaxDim; ++a) {
    if (!cell.is_free(a)) continue;
    const int sign = (t % 2 == 0) ? 1 : -1;
    Cell lower = cell;
    lower.axes = static_cast<std::uint8_t>(cell.axes & ~(1u << a));
    Cell upper = lower;
    upper.anchor[a] += 1;
    out.emplace_back(lower, -sign);
    out.emplace_back(upper, sign);
    ++t;
  }
  return out;
}

std::vector<Cell> closure_of(const Cell& cell) {
  // Faces of every codimension: choose a subset of the free axes to keep and
  // pin each dropped axis at the lower or upper end.
  std::vector<int> free_axes;
  for (int a = 0; a < kMaxDim; ++a)
    if (cell.is_free(a)) free_axes.push_back(a);
  const int d = static_cast<int>(free_axes.size());
  std::vector<Cell> out;
  int total = 1;
  for (int i = 0; i < d; ++i) total *= 3;
  out.reserve(static_cast<std::size_t>(total));
  for (int code = 0; code < total; ++code) {
    Cell f = cell;
    int rest = code;
    for (int i = 0; i < d; ++i) {
      const int choice = rest % 3;
      rest /= 3;
      const int a = free_axes[i];
      if (choice == 0) continue;
      f.axes = static_cast<std::uint8_t>(f.axes & ~(1u << a));
      if (choice == 2) f.anchor[a] += 1;
    }
    out.push_back(f);
  }
  return out;
}

Rational cell_measure(const Cell& cell, const GridSpec& grid) {
  return dyadic(grid.level() * cell.dim());
}

CubicalComplex::CubicalComplex(GridSpec grid) : grid_(grid), cells_(static_cast<std::size_t>(grid.n() + 1)) {}

void CubicalComplex::insert(const Cell& c) {
  if (!grid_.contains(c)) throw std::out_of_range("cell " + describe(c, grid_.n()) + " lies outside the box");
  if (cells_[c.dim()].count(c)) return;
  for (const Cell& f : closure_of(c)) cells_[f.dim()].insert(f);
}

void CubicalComplex::insert_all(const CubicalComplex& other) {
  if (!(other.grid_ == grid_)) throw std::invalid_argument("insert_all: grid mismatch");
  for (std::size_t d = 0; d < cells_.size(); ++d) cells_[d].insert(other.cells_[d].begin(), other.cells_[d].end());
}

void CubicalComplex::erase(const Cell& c) {
  if (static_cast<std::size_t>(c.dim()) < cells_.size()) cells_[c.dim()].erase(c);
}

bool CubicalComplex::contains(const Cell& c) const {
  const auto d = static_cast<std::size_t>(c.dim());
  return d < cells_.size() && cells_[d].count(c) > 0;
}

const std::set<Cell>& CubicalComplex::cells(int d) const {
  static const std::set<Cell> kEmpty;
  if (d < 0 || static_cast<std::size_t>(d) >= cells_.size()) return kEmpty;
  return cells_[d];
}

std::size_t CubicalComplex::size() const {
  std::size_t s = 0;
  for (const auto& layer : cells_) s += layer.size();
  return s;
}

int CubicalComplex::dim() const {
  for (int d = static_cast<int>(cells_.size()) - 1; d >= 0; --d)
    if (!cells_[d].empty()) return d;
  return -1;
}

bool CubicalComplex::is_face_closed() const {
  for (const auto& layer : cells_)
    for (const Cell& c : layer)
      for (const Cell& f : faces(c))
        if (!contains(f)) return false;
  return true;
}

bool CubicalComplex::is_subcomplex_of(const CubicalComplex& other) const {
  for (const auto& layer : cells_)
    for (const Cell& c : layer)
      if (!other.contains(c)) return false;
  return true;
}

std::vector<Cell> CubicalComplex::all_cells() const {
  std::vector<Cell> out;
  out.reserve(size());
  for (const auto& layer : cells_) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

long long CubicalComplex::euler_characteristic() const {
  long long chi = 0;
  for (std::size_t d = 0; d < cells_.size(); ++d)
    chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(cells_[d].size());
  return chi;
}

std::vector<Cell> cells_in_box(const Coord& lo, const Coord& hi, int n, int d) {
  std::vector<Cell> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != d) continue;
    Coord a = lo;
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if (((mask >> i) & 1u) && lo[i] >= hi[i]) ok = false;
    if (!ok) continue;
    while (true) {
      out.push_back(Cell{a, static_cast<std::uint8_t>(mask)});
      int i = 0;
      for (; i < n; ++i) {
        const int top = ((mask >> i) & 1u) ? hi[i] - 1 : hi[i];
        if (a[i] < top) {
          ++a[i];
          break;
        }
        a[i] = lo[i];
      }
      if (i == n) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CubicalComplex build_skeleton(const GridSpec& grid, int d) {
  const int n = grid.n();
  if (d < 0 || d > n)
    throw std::invalid_argument("build_skeleton: dimension " + std::to_string(d) + " outside [0, " +
                                std::to_string(n) + "]");
  CubicalComplex out(grid);
  std::vector<std::set<Cell>> layers(static_cast<std::size_t>(n + 1));
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const int dim = std::popcount(mask);
    if (dim > d) continue;
    // Odometer over anchors.
    Coord lo{}, hi{};
    for (int a = 0; a < n; ++a) {
      lo[a] = grid.lo(a);
      hi[a] = grid.hi(a) - (((mask >> a) & 1u) ? 1 : 0);
    }
    Cell c;
    c.axes = static_cast<std::uint8_t>(mask);
    c.anchor = lo;
    while (true) {
      layers[dim].insert(c);
      int a = 0;
      for (; a < n; ++a) {
        if (c.anchor[a] < hi[a]) {
          ++c.anchor[a];
          break;
        }
        c.anchor[a] = lo[a];
      }
      if (a == n) break;
    }
  }
  for (auto& layer : layers)
    for (const Cell& c : layer) out.insert(c);
  return out;
}

CubicalComplex closure(const GridSpec& grid, const std::vector<Cell>& cells) {
  CubicalComplex out(grid);
  for (const Cell& c : cells) out.insert(c);
  return out;
}

Rational barycenter_distance_sq(const Cell& c, const std::vector<Rational>& p, int n) {
  Rational s = 0;
  for (int a = 0; a < n; ++a) {
    Rational diff = Rational(c.doubled_center(a), 2) - p[a];
    s += diff * diff;
  }
  return s;
}

namespace {

// d > r - sqrt(n)/2 with d, r >= 0, decided exactly from d^2 and r.
bool beyond_inner_radius(const Rational& d_sq, const Rational& r, int n) {
  const Rational h_sq(n, 4);  // (sqrt(n)/2)^2
  // r - h < 0 always admits d >= 0; compare r^2 and h^2 since both nonneg.
  if (r * r < h_sq) return true;
  // d > r - h  <=>  d + h > r  <=>  d^2 + 2dh + h^2 > r^2
  //            <=>  2dh > r^2 - d^2 - h^2 =: t
  const Rational t = r * r - d_sq - h_sq;
  if (t < 0) return true;
  // both sides nonneg: 4 d^2 h^2 > t^2
  return 4 * d_sq * h_sq > t * t;
}

}  // namespace

CubicalComplex restrict_to_ball(const CubicalComplex& x, const BallQuery& q, BallMode mode) {
  const int n = x.grid().n();
  if (static_cast<int>(q.center.size()) != n) throw std::invalid_argument("restrict_to_ball: center dimension");
  if (q.radius <= 0) throw std::invalid_argument("restrict_to_ball: radius must be positive");
  const Rational r_sq = q.radius * q.radius;
  CubicalComplex out(x.grid());
  x.for_each_cell([&](const Cell& c) {
    const Rational d_sq = barycenter_distance_sq(c, q.center, n);
    if (d_sq > r_sq) return;
    if (mode == BallMode::SphereShell && !beyond_inner_radius(d_sq, q.radius, n)) return;
    out.insert(c);
  });
  return out;
}

std::vector<CubicalComplex> connected_components(const CubicalComplex& x) {
  std::vector<Cell> cells = x.all_cells();
  std::sort(cells.begin(), cells.end());
  std::map<Cell, std::size_t> index;
  for (std::size_t i = 0; i < cells.size(); ++i) index[cells[i]] = i;
  std::vector<std::size_t> parent(cells.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (const Cell& f : faces(cells[i])) {
      auto it = index.find(f);
      if (it == index.end()) continue;
      std::size_t a = find(i), b = find(it->second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<std::size_t, std::size_t> slot;  // root -> output position
  std::vector<CubicalComplex> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t root = find(i);
    auto [it, fresh] = slot.emplace(root, out.size());
    if (fresh) out.emplace_back(x.grid());
    out[it->second].insert(cells[i]);
  }
  return out;
}

std::string describe(const Cell& c, int n) {
  std::ostringstream os;
  os << '(';
  for (int a = 0; a < n; ++a) os << (a ? "," : "") << c.anchor[a];
  os << ";" << int(c.axes) << ')';
  return os.str();
}

void write_complex(std::ostream& os, const CubicalComplex& x) {
  const GridSpec& g = x.grid();
  os << g.n() << ' ' << g.level();
  for (int a = 0; a < g.n(); ++a) os << ' ' << g.lo(a);
  for (int a = 0; a < g.n(); ++a) os << ' ' << g.hi(a);
  os << '\n';
  x.for_each_cell([&](const Cell& c) {
    for (int a = 0; a < g.n(); ++a) os << c.anchor[a] << ' ';
    os << int(c.axes) << '\n';
  });
}

CubicalComplex read_complex(std::istream& is) {
  std::string line;
  int line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(is, out)) {
      ++line_no;
      auto pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos || out[pos] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_line(line)) throw std::runtime_error("complex file: missing header");
  std::istringstream header(line);
  int n = 0, level = 0;
  if (!(header >> n >> level)) throw std::runtime_error("complex file line " + std::to_string(line_no) + ": bad header");
  if (n < 1 || n > kMaxDim) throw std::runtime_error("complex file: ambient dimension out of range");
  std::vector<int> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
  for (auto& v : lo)
    if (!(header >> v)) throw std::runtime_error("complex file: header missing box corner");
  for (auto& v : hi)
    if (!(header >> v)) throw std::runtime_error("complex file: header missing box corner");
  CubicalComplex out(GridSpec(n, level, lo, hi));
  while (next_line(line)) {
    std::istringstream row(line);
    Cell c;
    for (int a = 0; a < n; ++a)
      if (!(row >> c.anchor[a])) throw std::runtime_error("complex file line " + std::to_string(line_no) + ": bad anchor");
    int mask = 0;
    if (!(row >> mask) || mask < 0 || mask >= (1 << n))
      throw std::runtime_error("complex file line " + std::to_string(line_no) + ": bad axes mask");
    c.axes = static_cast<std::uint8_t>(mask);
    out.insert(c);
  }
  return out;
}

void write_off(std::ostream& os, const CubicalComplex& x) {
  const int n = x.grid().n();
  if (n != 2 && n != 3) throw std::invalid_argument("write_off: OFF export needs n = 2 or 3");
  const double side = to_double(x.grid().side());
  std::map<Coord, std::size_t> vertex_index;
  std::vector<Coord> vertices;
  std::vector<std::array<std::size_t, 4>> quads;
  auto vid = [&](const Coord& v) {
    auto [it, fresh] = vertex_index.emplace(v, vertices.size());
    if (fresh) vertices.push_back(v);
    return it->second;
  };
  for (const Cell& c : x.cells(2)) {
    int a0 = -1, a1 = -1;
    for (int a = 0; a < n; ++a)
      if (c.is_free(a)) (a0 < 0 ? a0 : a1) = a;
    Coord p = c.anchor;
    Coord q = p, r = p, s = p;
    q[a0] += 1;
    r[a0] += 1;
    r[a1] += 1;
    s[a1] += 1;
    quads.push_back({vid(p), vid(q), vid(r), vid(s)});
  }
  os << "OFF\n" << vertices.size() << ' ' << quads.size() << " 0\n";
  for (const Coord& v : vertices) os << v[0] * side << ' ' << v[1] * side << ' ' << (n == 3 ? v[2] * side : 0.0) << '\n';
  for (const auto& f : quads) os << "4 " << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << f[3] << '\n';
}

}  // namespace plateau

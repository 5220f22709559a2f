#include "plateau/density.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <random>
#include <stdexcept>

namespace plateau {

namespace {

// Calls f(x) for every barycenter of every cell of the box, in physical
// coordinates. Barycenters are exactly the half-integer lattice points.
template <typename F>
void for_each_barycenter(const GridSpec& grid, F&& f) {
  const int n = grid.n();
  const Rational half_side = grid.side() / 2;
  std::vector<int> doubled(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) doubled[a] = 2 * grid.lo(a);
  std::vector<Rational> x(static_cast<std::size_t>(n));
  while (true) {
    for (int a = 0; a < n; ++a) x[a] = doubled[a] * half_side;
    f(x);
    int a = 0;
    for (; a < n; ++a) {
      if (doubled[a] < 2 * grid.hi(a)) {
        ++doubled[a];
        break;
      }
      doubled[a] = 2 * grid.lo(a);
    }
    if (a == n) break;
  }
}

Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational pow_q(Rational base, unsigned e) {
  Rational r = 1;
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

void fill_bounds(DensityField& f, const GridSpec& grid) {
  bool first = true;
  for_each_barycenter(grid, [&](const std::vector<Rational>& x) {
    Rational v = f(x);
    if (first || v < f.lower) f.lower = v;
    if (first || v > f.upper) f.upper = v;
    first = false;
  });
}

}  // namespace

std::vector<Rational> barycenter(const Cell& c, const GridSpec& grid) {
  const Rational half_side = grid.side() / 2;
  std::vector<Rational> x(static_cast<std::size_t>(grid.n()));
  for (int a = 0; a < grid.n(); ++a) x[a] = c.doubled_center(a) * half_side;
  return x;
}

DensityField DensityField::constant(const Rational& c) {
  DensityField f;
  f.kind = Kind::Constant;
  f.params = {c};
  f.lower = f.upper = c;
  f.hoelder_alpha = 1;
  f.hoelder_const = 0;
  return f;
}

DensityField DensityField::affine(std::vector<Rational> coefficients, const GridSpec& grid) {
  if (static_cast<int>(coefficients.size()) != grid.n() + 1)
    throw std::invalid_argument("affine density needs n + 1 coefficients");
  DensityField f;
  f.kind = Kind::Affine;
  f.params = std::move(coefficients);
  f.hoelder_alpha = 1;
  f.hoelder_const = 0;
  for (std::size_t i = 1; i < f.params.size(); ++i) f.hoelder_const += abs_q(f.params[i]);
  fill_bounds(f, grid);
  return f;
}

DensityField DensityField::radial(const Rational& c0, const Rational& c1, std::vector<Rational> center,
                                  const GridSpec& grid) {
  if (static_cast<int>(center.size()) != grid.n()) throw std::invalid_argument("radial density center dimension");
  DensityField f;
  f.kind = Kind::Radial;
  f.params = {c0, c1};
  f.params.insert(f.params.end(), center.begin(), center.end());
  // Lipschitz bound 2|c1| max|x - q|, with the L1 spread bounding the L2 one.
  Rational spread = 0;
  for (int a = 0; a < grid.n(); ++a) {
    Rational lo = grid.lo(a) * grid.side() - center[a];
    Rational hi = grid.hi(a) * grid.side() - center[a];
    spread += std::max(abs_q(lo), abs_q(hi));
  }
  f.hoelder_alpha = 1;
  f.hoelder_const = 2 * abs_q(c1) * spread;
  fill_bounds(f, grid);
  return f;
}

Rational DensityField::operator()(const std::vector<Rational>& x) const {
  switch (kind) {
    case Kind::Constant: return params[0];
    case Kind::Affine: {
      Rational v = params[0];
      for (std::size_t i = 0; i < x.size(); ++i) v += params[i + 1] * x[i];
      return v;
    }
    case Kind::Radial: {
      Rational r2 = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        Rational d = x[i] - params[i + 2];
        r2 += d * d;
      }
      return params[0] + params[1] * r2;
    }
  }
  throw std::logic_error("unknown density kind");
}

Rational DensityField::at(const Cell& c, const GridSpec& grid) const {
  if (kind == Kind::Constant) return params[0];
  return (*this)(barycenter(c, grid));
}

void DensityField::validate(const GridSpec& grid, std::uint64_t seed) const {
  if (lower <= 0) throw std::invalid_argument("density: lower bound a must be positive");
  if (lower > upper) throw std::invalid_argument("density: requires a <= b");
  if (hoelder_alpha <= 0 || hoelder_alpha > 1) throw std::invalid_argument("density: Hölder exponent must lie in (0, 1]");
  if (hoelder_const < 0) throw std::invalid_argument("density: Hölder constant must be nonnegative");
  std::vector<std::vector<Rational>> points;
  for_each_barycenter(grid, [&](const std::vector<Rational>& x) {
    Rational v = (*this)(x);
    if (v < lower || v > upper)
      throw std::invalid_argument("density: value " + to_string(v) + " outside [a, b] = [" + to_string(lower) + ", " +
                                  to_string(upper) + "]");
    points.push_back(x);
  });
  // |f(x) - f(y)| <= C |x - y|^(p/q)  <=>  |f(x) - f(y)|^(2q) <= C^(2q) (|x - y|^2)^p
  const auto p = static_cast<unsigned>(boost::multiprecision::numerator(hoelder_alpha));
  const auto q = static_cast<unsigned>(boost::multiprecision::denominator(hoelder_alpha));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  const std::size_t samples = std::min<std::size_t>(256, points.size() * points.size());
  for (std::size_t s = 0; s < samples; ++s) {
    const auto& x = points[pick(rng)];
    const auto& y = points[pick(rng)];
    Rational diff = abs_q((*this)(x) - (*this)(y));
    Rational dist2 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) dist2 += (x[i] - y[i]) * (x[i] - y[i]);
    if (pow_q(diff, 2 * q) > pow_q(hoelder_const, 2 * q) * pow_q(dist2, p))
      throw std::invalid_argument("density: Hölder bound violated on a sampled pair");
  }
}

std::string DensityField::kind_name() const {
  switch (kind) {
    case Kind::Constant: return "constant";
    case Kind::Radial: return "radial";
    case Kind::Affine: return "affine";
  }
  return "?";
}

}  // namespace plateau

#ifndef PLATEAU_DENSITY_HPP
#define PLATEAU_DENSITY_HPP

#include "plateau/lattice.hpp"
#include "plateau/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace plateau {

/// Positive Hölder weight f multiplying m-dimensional measure. Values are
/// exact rationals evaluated at physical coordinates (lattice * 2^-k).
///
///   constant: f = c                          params = {c}
///   radial:   f = c0 + c1 |x - q|^2          params = {c0, c1, q_1..q_n}
///   affine:   f = c0 + sum_i c_i x_i         params = {c0, c_1..c_n}
struct DensityField {
  enum class Kind { Constant, Radial, Affine };

  Kind kind = Kind::Constant;
  std::vector<Rational> params{Rational(1)};
  Rational lower = 1;  // a
  Rational upper = 1;  // b
  Rational hoelder_alpha = 1;
  Rational hoelder_const = 0;

  static DensityField constant(const Rational& c);
  static DensityField affine(std::vector<Rational> coefficients, const GridSpec& grid);
  static DensityField radial(const Rational& c0, const Rational& c1, std::vector<Rational> center,
                             const GridSpec& grid);

  Rational operator()(const std::vector<Rational>& x) const;
  /// f at the cell barycenter.
  Rational at(const Cell& c, const GridSpec& grid) const;

  /// Checks a <= f <= b on every cell barycenter of the box and the Hölder
  /// bound on a deterministic sample of barycenter pairs. Throws
  /// std::invalid_argument naming the violated constraint.
  void validate(const GridSpec& grid, std::uint64_t seed = 1) const;

  std::string kind_name() const;
};

/// Physical coordinates of the cell barycenter.
std::vector<Rational> barycenter(const Cell& c, const GridSpec& grid);

}  // namespace plateau

#endif

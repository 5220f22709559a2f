#ifndef PLATEAU_FIELD_HPP
#define PLATEAU_FIELD_HPP

// Exact scalar fields usable as Eigen scalars: GF(2), GF(p) with a runtime
// prime, and the rationals.

#include "plateau/rational.hpp"

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace plateau {

struct Coeffs {
  enum class Kind { GF2, GFp, Rational };
  Kind kind = Kind::GF2;
  std::int64_t prime = 2;

  static Coeffs gf2() { return {Kind::GF2, 2}; }
  static Coeffs gfp(std::int64_t p);
  static Coeffs rationals() { return {Kind::Rational, 0}; }

  std::string name() const;
  friend bool operator==(const Coeffs&, const Coeffs&) = default;
};

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline Coeffs Coeffs::gfp(std::int64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("GF(p) requires a prime, got " + std::to_string(p));
  if (p == 2) return gf2();
  if (p > (std::int64_t{1} << 31)) throw std::invalid_argument("GF(p) prime too large");
  return {Kind::GFp, p};
}

inline std::string Coeffs::name() const {
  switch (kind) {
    case Kind::GF2: return "GF(2)";
    case Kind::GFp: return "GF(" + std::to_string(prime) + ")";
    case Kind::Rational: return "Q";
  }
  return "?";
}

/// Element of GF(2).
struct Gf2 {
  std::uint8_t v = 0;
  constexpr Gf2() = default;
  constexpr Gf2(int x) : v(static_cast<std::uint8_t>(x & 1)) {}

  friend constexpr Gf2 operator+(Gf2 a, Gf2 b) { return Gf2(a.v ^ b.v); }
  friend constexpr Gf2 operator-(Gf2 a, Gf2 b) { return Gf2(a.v ^ b.v); }
  friend constexpr Gf2 operator*(Gf2 a, Gf2 b) { return Gf2(a.v & b.v); }
  friend Gf2 operator/(Gf2 a, Gf2 b) {
    if (!b.v) throw std::domain_error("GF(2) division by zero");
    return a;
  }
  constexpr Gf2 operator-() const { return *this; }
  Gf2& operator+=(Gf2 b) { v ^= b.v; return *this; }
  Gf2& operator-=(Gf2 b) { v ^= b.v; return *this; }
  Gf2& operator*=(Gf2 b) { v &= b.v; return *this; }
  Gf2& operator/=(Gf2 b) { return *this = *this / b; }
  friend constexpr bool operator==(Gf2 a, Gf2 b) { return a.v == b.v; }
  friend std::ostream& operator<<(std::ostream& os, Gf2 a) { return os << int(a.v); }
};

/// Element of GF(p). The modulus travels with the value; modulus 0 marks an
/// integer literal (Eigen builds Scalar(0) and Scalar(1)) that adopts the
/// modulus of whatever it is combined with.
struct ModP {
  std::int64_t v = 0;
  std::int64_t p = 0;
  constexpr ModP() = default;
  constexpr ModP(int x) : v(x), p(0) {}
  ModP(std::int64_t x, std::int64_t mod) : v(((x % mod) + mod) % mod), p(mod) {}

  static std::int64_t common(const ModP& a, const ModP& b) {
    if (a.p && b.p && a.p != b.p) throw std::logic_error("mixed GF(p) moduli");
    return a.p ? a.p : b.p;
  }
  static ModP make(std::int64_t x, std::int64_t mod) {
    ModP r;
    if (mod) {
      r.v = ((x % mod) + mod) % mod;
      r.p = mod;
    } else {
      r.v = x;
    }
    return r;
  }
  friend ModP operator+(const ModP& a, const ModP& b) { return make(a.v + b.v, common(a, b)); }
  friend ModP operator-(const ModP& a, const ModP& b) { return make(a.v - b.v, common(a, b)); }
  friend ModP operator*(const ModP& a, const ModP& b) {
    std::int64_t m = common(a, b);
    return make(m ? (a.v % m) * (b.v % m) : a.v * b.v, m);
  }
  ModP inverse() const;
  friend ModP operator/(const ModP& a, const ModP& b) { return a * b.inverse(); }
  ModP operator-() const { return make(-v, p); }
  ModP& operator+=(const ModP& b) { return *this = *this + b; }
  ModP& operator-=(const ModP& b) { return *this = *this - b; }
  ModP& operator*=(const ModP& b) { return *this = *this * b; }
  ModP& operator/=(const ModP& b) { return *this = *this / b; }
  friend bool operator==(const ModP& a, const ModP& b) {
    std::int64_t m = common(a, b);
    if (!m) return a.v == b.v;
    return ((a.v % m) + m) % m == ((b.v % m) + m) % m;
  }
  friend std::ostream& operator<<(std::ostream& os, const ModP& a) { return os << a.v; }
};

inline ModP ModP::inverse() const {
  if (!p) {
    if (v == 1 || v == -1) return *this;
    throw std::domain_error("inverse of an unreduced GF(p) literal");
  }
  std::int64_t a = ((v % p) + p) % p;
  if (a == 0) throw std::domain_error("GF(p) division by zero");
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return make(t, p);
}

/// Per-scalar glue: conversion from the exact rational representation used
/// in configuration files, and zero tests.
template <typename Scalar>
struct FieldTraits;

template <>
struct FieldTraits<Gf2> {
  static Gf2 from_rational(const Rational& q, const Coeffs&) {
    const BigInt den = boost::multiprecision::denominator(q);
    if (den % 2 == 0) throw std::invalid_argument("value " + to_string(q) + " undefined in GF(2)");
    const BigInt num = boost::multiprecision::numerator(q);
    return Gf2(static_cast<int>(num % 2 != 0));
  }
  static Rational lift(Gf2 a) { return Rational(a.v); }
  static bool is_zero(Gf2 a) { return a.v == 0; }
};

template <>
struct FieldTraits<ModP> {
  static ModP from_rational(const Rational& q, const Coeffs& c) {
    const std::int64_t p = c.prime;
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    BigInt nm = num % p;
    BigInt dm = den % p;
    if (dm == 0) throw std::invalid_argument("value " + to_string(q) + " undefined in " + c.name());
    return ModP(nm.convert_to<std::int64_t>(), p) / ModP(dm.convert_to<std::int64_t>(), p);
  }
  static Rational lift(const ModP& a) { return Rational(a.v); }
  static bool is_zero(const ModP& a) { return a.p ? (a.v % a.p) == 0 : a.v == 0; }
};

template <>
struct FieldTraits<Rational> {
  static Rational from_rational(const Rational& q, const Coeffs&) { return q; }
  static Rational lift(const Rational& a) { return a; }
  static bool is_zero(const Rational& a) { return a == 0; }
};

template <typename Scalar>
bool is_zero(const Scalar& s) {
  return FieldTraits<Scalar>::is_zero(s);
}

}  // namespace plateau

namespace Eigen {

template <>
struct NumTraits<plateau::Gf2> : GenericNumTraits<plateau::Gf2> {
  using Real = plateau::Gf2;
  using NonInteger = plateau::Gf2;
  using Literal = plateau::Gf2;
  using Nested = plateau::Gf2;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 1,
    MulCost = 1
  };
  static plateau::Gf2 epsilon() { return plateau::Gf2(0); }
  static plateau::Gf2 dummy_precision() { return plateau::Gf2(0); }
  static int digits10() { return 1; }
};

template <>
struct NumTraits<plateau::ModP> : GenericNumTraits<plateau::ModP> {
  using Real = plateau::ModP;
  using NonInteger = plateau::ModP;
  using Literal = plateau::ModP;
  using Nested = plateau::ModP;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static plateau::ModP epsilon() { return plateau::ModP(0); }
  static plateau::ModP dummy_precision() { return plateau::ModP(0); }
  static int digits10() { return 10; }
};

}  // namespace Eigen

#endif

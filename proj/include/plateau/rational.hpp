#ifndef PLATEAU_RATIONAL_HPP
#define PLATEAU_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>

// Boost's byte-container probe chokes on Eigen 3.4 matrices (void
// const_iterator) during overload resolution of mixed scalar products.
namespace boost::multiprecision::detail {
template <class S, int R, int C, int O, int MR, int MC>
struct is_byte_container<Eigen::Matrix<S, R, C, O, MR, MC>> : boost::false_type {};
template <class D>
struct is_byte_container<Eigen::DenseBase<D>> : boost::false_type {};
template <class D>
struct is_byte_container<Eigen::MatrixBase<D>> : boost::false_type {};
}  // namespace boost::multiprecision::detail

namespace plateau {

// Expression templates off: Eigen expressions and boost expressions do not
// compose.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Renders a rational as "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Parses "p", "p/q" or a finite decimal such as "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto parse_int = [&](const std::string& part) {
    if (part.empty() || part == "-" || part == "+")
      throw std::invalid_argument("malformed rational '" + s + "'");
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    for (std::size_t i = start; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9')
        throw std::invalid_argument("malformed rational '" + s + "'");
    return BigInt(part[0] == '+' ? part.substr(1) : part);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt den = parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(parse_int(s.substr(0, slash)), den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string frac = s.substr(dot + 1);
    std::string whole = s.substr(0, dot);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt w = parse_int(whole);
    BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    if (negative) f = -f;
    return Rational(w) + Rational(f, scale);
  }
  return Rational(parse_int(s));
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact 2^-k.
inline Rational dyadic(int k) {
  BigInt p = 1;
  p <<= (k >= 0 ? k : -k);
  return k >= 0 ? Rational(BigInt(1), p) : Rational(p);
}

}  // namespace plateau

#endif

#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

namespace nilkt {

// GMP-backed rationals; always stored in lowest terms with positive denominator.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

template <typename T>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

inline Rational abs_val(const Rational& x) { return boost::multiprecision::abs(x); }
inline double abs_val(double x) { return std::fabs(x); }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <typename To>
To scalar_cast(const Rational& x) {
  if constexpr (is_exact_v<To>)
    return x;
  else
    return to_double(x);
}

/// Pivot/zero tolerance for rank decisions: 0 in the exact field, scale-aware in floats.
template <typename T>
T default_tol(const T& scale) {
  if constexpr (is_exact_v<T>)
    return T(0);
  else
    return 1e-9 * (1.0 + scale);
}

namespace detail {
/// "[+-]?digits" -> Integer; nullopt otherwise.
inline std::optional<Integer> parse_integer(const std::string& s) {
  size_t at = 0;
  bool neg = false;
  if (at < s.size() && (s[at] == '-' || s[at] == '+')) neg = (s[at++] == '-');
  if (at == s.size()) return std::nullopt;
  Integer v(0);
  for (; at < s.size(); ++at) {
    if (!std::isdigit((unsigned char)s[at])) return std::nullopt;
    v = v * 10 + (s[at] - '0');
  }
  return neg ? Integer(-v) : v;
}
}  // namespace detail

/// Parses "p", "-p", "p/q" (q > 0 after normalization). Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    auto n = detail::parse_integer(s);
    if (!n) return std::nullopt;
    return Rational(*n);
  }
  auto n = detail::parse_integer(s.substr(0, slash));
  auto d = detail::parse_integer(s.substr(slash + 1));
  if (!n || !d || *d == 0) return std::nullopt;
  return Rational(*n, *d);
}

inline std::string to_string(const Rational& x) {
  std::ostringstream os;
  os << x;  // prints "p" or "p/q"
  return os.str();
}

inline std::string to_string(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace nilkt

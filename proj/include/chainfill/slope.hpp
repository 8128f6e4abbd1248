#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <charconv>
#include <ostream>

namespace chainfill {

using Int = std::int64_t;
using Wide = __int128;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Int abs_int(Int x) { return x < 0 ? -x : x; }

/// Narrow a wide intermediate, throwing if it does not fit.
inline Int narrow(Wide w) {
  if (w > static_cast<Wide>(INT64_MAX) || w < static_cast<Wide>(INT64_MIN))
    throw Error("integer overflow");
  return static_cast<Int>(w);
}

/// Representative of a mod m in [0, |m|).
inline Int floor_mod(Int a, Int m) {
  Int am = abs_int(m);
  Int r = a % am;
  return r < 0 ? r + am : r;
}

/// Extended gcd: returns g = gcd(a,b) >= 0 with a*x + b*y = g.
inline Int ext_gcd(Int a, Int b, Int& x, Int& y) {
  Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
    t = y0 - q * y1; y0 = y1; y1 = t;
  }
  if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
  x = x0;
  y = y0;
  return a;
}

/// Inverse of a modulo m (m >= 2); throws when not a unit.
inline Int mod_inverse(Int a, Int m) {
  Int x, y;
  Int g = ext_gcd(floor_mod(a, m), m, x, y);
  if (g != 1) throw Error("not invertible modulo " + std::to_string(m));
  return floor_mod(x, m);
}

struct Slope {
  Int num = 1;
  Int den = 0;

  bool is_infinite() const { return den == 0; }
  bool is_integer() const { return den == 1; }

  friend bool operator==(const Slope&, const Slope&) = default;
  friend auto operator<=>(const Slope&, const Slope&) = default;
};

inline Slope make_slope(Int p, Int q) {
  if (p == 0 && q == 0) throw Error("slope 0/0 is undefined");
  Int g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

inline Slope infinity() { return {1, 0}; }
inline Slope integer_slope(Int k) { return {k, 1}; }

/// Geometric intersection number |ad - bc|.
inline Int distance(const Slope& a, const Slope& b) {
  return abs_int(narrow(static_cast<Wide>(a.num) * b.den - static_cast<Wide>(b.num) * a.den));
}

/// Compare by rational value; infinity sorts last.
inline bool value_less(const Slope& a, const Slope& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return static_cast<Wide>(a.num) * b.den < static_cast<Wide>(b.num) * a.den;
}

inline Slope negate(const Slope& s) { return s.is_infinite() ? s : Slope{-s.num, s.den}; }
inline Slope reciprocal(const Slope& s) { return make_slope(s.den, s.num); }
inline Slope add_integer(const Slope& s, Int k) {
  return s.is_infinite() ? s : make_slope(narrow(s.num + static_cast<Wide>(k) * s.den), s.den);
}

/// x -> (alpha x + beta) / (gamma x + delta) on slopes num/den.
struct MoebiusMap {
  Int alpha = 1, beta = 0, gamma = 0, delta = 1;

  Int det() const { return alpha * delta - beta * gamma; }
  bool valid() const { return abs_int(det()) == 1; }

  /// Same action on slopes (matrices equal up to sign).
  bool same_action(const MoebiusMap& o) const {
    return (alpha == o.alpha && beta == o.beta && gamma == o.gamma && delta == o.delta) ||
           (alpha == -o.alpha && beta == -o.beta && gamma == -o.gamma && delta == -o.delta);
  }

  friend bool operator==(const MoebiusMap&, const MoebiusMap&) = default;
};

inline MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
  return {m1.alpha * m2.alpha + m1.beta * m2.gamma, m1.alpha * m2.beta + m1.beta * m2.delta,
          m1.gamma * m2.alpha + m1.delta * m2.gamma, m1.gamma * m2.beta + m1.delta * m2.delta};
}

inline MoebiusMap operator*(const MoebiusMap& m1, const MoebiusMap& m2) { return compose(m1, m2); }

inline MoebiusMap inverse(const MoebiusMap& m) {
  Int d = m.det();
  if (abs_int(d) != 1) throw Error("Moebius map is not unimodular");
  return {m.delta * d, -m.beta * d, -m.gamma * d, m.alpha * d};
}

inline Slope apply_moebius(const MoebiusMap& m, const Slope& s) {
  if (!m.valid()) throw Error("Moebius map is not unimodular");
  Wide p = static_cast<Wide>(m.alpha) * s.num + static_cast<Wide>(m.beta) * s.den;
  Wide q = static_cast<Wide>(m.gamma) * s.num + static_cast<Wide>(m.delta) * s.den;
  return make_slope(narrow(p), narrow(q));
}

namespace maps {
inline constexpr MoebiusMap identity{1, 0, 0, 1};
inline constexpr MoebiusMap inv{0, 1, 1, 0};            // 1/x
inline constexpr MoebiusMap one_minus{-1, 1, 0, 1};     // 1-x
inline constexpr MoebiusMap x_over_x_minus_1{1, 0, 1, -1};
inline constexpr MoebiusMap inv_one_minus{0, 1, -1, 1}; // 1/(1-x)
inline constexpr MoebiusMap x_minus_1_over_x{1, -1, 1, 0};
inline constexpr MoebiusMap negation{-1, 0, 0, 1};
}  // namespace maps

inline std::string to_string(const Slope& s) {
  if (s.is_infinite()) return "inf";
  if (s.den == 1) return std::to_string(s.num);
  return std::to_string(s.num) + "/" + std::to_string(s.den);
}

inline std::ostream& operator<<(std::ostream& os, const Slope& s) { return os << to_string(s); }

namespace detail {
inline std::string_view trim(std::string_view v) {
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
  return v;
}

inline Int parse_int(std::string_view v) {
  v = trim(v);
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  Int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw Error("malformed integer '" + std::string(v) + "'");
  return out;
}
}  // namespace detail

/// Accepts "p/q", "p", "inf" (also "infinity", "oo").
inline Slope parse_slope(std::string_view text) {
  auto v = detail::trim(text);
  if (v == "inf" || v == "infinity" || v == "oo" || v == "Inf" || v == "INF") return infinity();
  auto slash = v.find('/');
  if (slash == std::string_view::npos) return make_slope(detail::parse_int(v), 1);
  return make_slope(detail::parse_int(v.substr(0, slash)), detail::parse_int(v.substr(slash + 1)));
}

}  // namespace chainfill

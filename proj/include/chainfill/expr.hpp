#pragma once

// Integer polynomial expressions in single-letter variables, e.g. "2n(t+3u)-t-u",
// "4n^2+8n-1", "(2n+1)(2m+1)-4". Evaluated exactly, either to an integer or to
// a polynomial in one variable.

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chainfill/slope.hpp"

namespace chainfill {

/// Univariate integer polynomial, coefficients low degree first.
class Poly {
 public:
  Poly() = default;
  Poly(Int c) { if (c != 0) coef_.push_back(c); }  // NOLINT(implicit)
  static Poly variable() { Poly p; p.coef_ = {0, 1}; return p; }

  int degree() const { return static_cast<int>(coef_.size()) - 1; }
  Int coefficient(int k) const { return k < static_cast<int>(coef_.size()) ? coef_[k] : 0; }
  bool is_zero() const { return coef_.empty(); }
  bool is_constant() const { return coef_.size() <= 1; }
  Int constant() const { return coefficient(0); }

  Int operator()(Int x) const {
    Wide acc = 0;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) acc = acc * x + *it;
    return narrow(acc);
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.coef_.resize(std::max(a.coef_.size(), b.coef_.size()), 0);
    for (size_t i = 0; i < r.coef_.size(); ++i) r.coef_[i] = a.coefficient(int(i)) + b.coefficient(int(i));
    r.trim();
    return r;
  }
  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& c : r.coef_) c = -c;
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly r;
    r.coef_.assign(a.coef_.size() + b.coef_.size() - 1, 0);
    for (size_t i = 0; i < a.coef_.size(); ++i)
      for (size_t j = 0; j < b.coef_.size(); ++j)
        r.coef_[i + j] = narrow(static_cast<Wide>(r.coef_[i + j]) + static_cast<Wide>(a.coef_[i]) * b.coef_[j]);
    r.trim();
    return r;
  }
  friend bool operator==(const Poly&, const Poly&) = default;

  std::string str(char var = 'n') const {
    if (is_zero()) return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
      Int c = coefficient(k);
      if (c == 0) continue;
      if (!out.empty()) out += c < 0 ? "-" : "+";
      else if (c < 0) out += "-";
      Int a = abs_int(c);
      if (a != 1 || k == 0) out += std::to_string(a);
      if (k >= 1) out += var;
      if (k >= 2) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  void trim() { while (!coef_.empty() && coef_.back() == 0) coef_.pop_back(); }
  std::vector<Int> coef_;
};

namespace detail {

inline Int ipow(Int base, Int e) {
  Wide r = 1;
  for (Int i = 0; i < e; ++i) r = r * base;
  return narrow(r);
}
inline Poly ipow(const Poly& base, Int e) {
  Poly r(1);
  for (Int i = 0; i < e; ++i) r = r * base;
  return r;
}

template <class V>
class ExprParser {
 public:
  ExprParser(std::string_view text, const std::map<char, V>& vars) : s_(text), vars_(vars) {}

  V parse() {
    V v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("expression '" + std::string(s_) + "': " + what);
  }
  void skip() { while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_; }
  char peek() { skip(); return pos_ < s_.size() ? s_[pos_] : '\0'; }

  V expr() {
    V acc = term();
    for (;;) {
      char c = peek();
      if (c == '+') { ++pos_; acc = acc + term(); }
      else if (c == '-') { ++pos_; acc = acc - term(); }
      else return acc;
    }
  }

  V term() {
    V acc = unary();
    for (;;) {
      char c = peek();
      if (c == '*') { ++pos_; acc = acc * unary(); }
      else if (c == '(' || std::isalpha(static_cast<unsigned char>(c))) acc = acc * power();
      else return acc;
    }
  }

  V unary() {
    char c = peek();
    if (c == '-') { ++pos_; return -unary(); }
    if (c == '+') { ++pos_; return unary(); }
    return power();
  }

  V power() {
    V base = primary();
    if (peek() == '^') {
      ++pos_;
      skip();
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent expected");
      return ipow(base, parse_int(s_.substr(start, pos_ - start)));
    }
    return base;
  }

  V primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      V v = expr();
      if (peek() != ')') fail("')' expected");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return V(parse_int(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      ++pos_;
      auto it = vars_.find(c);
      if (it == vars_.end()) fail(std::string("unbound variable '") + c + "'");
      return it->second;
    }
    fail("operand expected");
  }

  std::string_view s_;
  const std::map<char, V>& vars_;
  size_t pos_ = 0;
};

}  // namespace detail

using Bindings = std::map<char, Int>;

inline Int eval_expr(std::string_view text, const Bindings& vars = {}) {
  return detail::ExprParser<Int>(text, vars).parse();
}

/// Evaluate with one variable kept symbolic; other variables bound to constants.
inline Poly eval_poly(std::string_view text, char var = 'n', const Bindings& constants = {}) {
  std::map<char, Poly> vars;
  for (auto& [k, v] : constants) vars[k] = Poly(v);
  vars[var] = Poly::variable();
  return detail::ExprParser<Poly>(text, vars).parse();
}

inline Poly eval_poly(std::string_view text, const std::map<char, Poly>& vars) {
  return detail::ExprParser<Poly>(text, vars).parse();
}

}  // namespace chainfill

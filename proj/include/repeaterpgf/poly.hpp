// Sparse exact polynomials in the distribution variable t and, optionally,
// the failure probability q.
//
// One class covers both modes used by the analytic engine:
//   * bivariate: terms c * q^i * t^j with exact rational c (q kept symbolic);
//   * univariate in t: the same container after substituting a numeric
//     rational q (all q-exponents collapse to zero);
//   * univariate in q: t-degree zero throughout (used for t=1 slices).
//
// Term order is lexicographic with t major, which makes iteration order, the
// division algorithm and the serialized form deterministic.

#pragma once

#include "repeaterpgf/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rpgf {

class Poly {
public:
  // (t_exp, q_exp) -> coefficient; zero coefficients are never stored.
  using Key = std::pair<std::int64_t, std::int64_t>;
  using TermMap = std::map<Key, ExactRational>;

  Poly() = default;

  static Poly zero() { return Poly(); }
  static Poly one() { return constant(ExactRational(1)); }
  static Poly constant(const ExactRational& c);
  // c * q^q_exp * t^t_exp
  static Poly term(const ExactRational& c, std::int64_t t_exp, std::int64_t q_exp = 0);
  static Poly var_t() { return term(ExactRational(1), 1, 0); }
  static Poly var_q() { return term(ExactRational(1), 0, 1); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::int64_t degree_t() const;  // -1 for the zero polynomial
  std::int64_t degree_q() const;
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  // Coefficient of q^q_exp * t^t_exp (zero if absent).
  ExactRational coeff(std::int64_t t_exp, std::int64_t q_exp = 0) const;
  // Coefficient of t^t_exp as a polynomial in q.
  Poly coeff_t(std::int64_t t_exp) const;

  void add_term(std::int64_t t_exp, std::int64_t q_exp, const ExactRational& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
  Poly operator*(const ExactRational& c) const;
  Poly pow(std::uint64_t e) const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // Exact evaluation and substitution.
  ExactRational eval(const ExactRational& q, const ExactRational& t) const;
  double eval_double(double q, double t) const;
  Poly substitute_q(const ExactRational& q) const;  // collapse q-exponents
  Poly substitute_t(const ExactRational& t) const;  // collapse t-exponents
  Poly substitute_t_power(std::int64_t k) const;    // t -> t^k, k >= 1
  Poly derivative_t() const;
  Poly derivative_q() const;

  // Exact single-divisor division: returns the quotient iff *this is an exact
  // multiple of d, std::nullopt otherwise.  d must be nonzero.
  std::optional<Poly> divide_exact(const Poly& d) const;

  // True iff every monomial of *this has q_exp == 0 (resp. t_exp == 0).
  bool is_univariate_t() const;
  bool is_univariate_q() const;

  // Canonical text form, e.g. "[(0,0,1),(1,2,-3/4)]" listing
  // (t_exp,q_exp,coeff) in term order.  Exact round-trip with parse().
  std::string to_string() const;
  static Poly parse(const std::string& s);

private:
  TermMap terms_;
};

// Divides num and den by their common integer content and normalizes the sign
// so that den's lexicographically smallest term has a positive coefficient;
// afterwards all coefficients are integers with overall gcd 1 across the pair.
void normalize_pair(Poly& num, Poly& den);

}  // namespace rpgf

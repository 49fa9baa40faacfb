// Probability generating functions as exact rational functions of t.
//
// A SymbolicPGF is a pair of polynomials num/den, either bivariate in (q,t)
// with q symbolic, or univariate in t after substituting a numeric rational
// q.  Construction cancels removable common factors (powers of (1-t) and
// monomial content) and rejects representations whose denominator vanishes
// at t=1, so mean/variance can always be taken by exact differentiation.
//
// FactoredPGF is the engine-facing form: a monomial prefactor over a product
// of geometric-series factors (1 - q^a t^b).  Sums of these (one per ordering
// domain) evaluate fast in double precision at arbitrary real (q,t) and can
// be expanded exactly into a SymbolicPGF when a closed form is wanted.

#pragma once

#include "repeaterpgf/poly.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rpgf {

class SymbolicPGF {
public:
  // num/den in (q,t); if numeric_q is set it is substituted first and the
  // stored polynomials are univariate in t.  Throws std::domain_error when
  // the reduced denominator vanishes at t=1 (removable singularity that the
  // caller failed to cancel) or when den is identically zero.
  static SymbolicPGF make(Poly num, Poly den,
                          std::optional<ExactRational> numeric_q = std::nullopt);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_bivariate() const { return !numeric_q_.has_value(); }
  const std::optional<ExactRational>& numeric_q() const { return numeric_q_; }

  // Substitute a numeric rational q into a bivariate PGF.
  SymbolicPGF with_numeric_q(const ExactRational& q) const;

  // Evaluation.  The double overloads accept a q value which is ignored in
  // numeric-q mode; eval(t) alone requires numeric-q mode (or q-free polys).
  double eval(double t) const;
  double eval_qt(double q, double t) const;
  ExactRational eval_exact(const ExactRational& t) const;

  // G'(1) and Var = G''(1) + G'(1) - G'(1)^2 by exact differentiation and
  // the quotient rule; numeric-q mode only.
  ExactRational mean_exact() const;
  ExactRational variance_exact() const;
  double mean() const { return mean_exact().to_double(); }
  double variance() const { return variance_exact().to_double(); }

  // For bivariate PGFs: G'(1) as an exact rational function of q,
  // returned as a (numerator, denominator) pair of polynomials in q.
  std::pair<Poly, Poly> mean_in_q() const;

  // E[e^{-alpha k X}] = G(e^{-k alpha}); numeric-q mode.
  double exp_moment(double alpha, int k = 1) const;

  // First `order`+1 power-series coefficients of G around t=0 (numeric-q
  // mode); index k is P(X = k) for a PGF.
  std::vector<ExactRational> series(std::size_t order) const;

  // True iff a and b denote the same rational function: cross-multiplied
  // numerators agree as polynomials.  Both sides must be in the same mode
  // (and, in numeric mode, have equal q).
  static bool symbolic_equal(const SymbolicPGF& a, const SymbolicPGF& b);

  // Canonical text form "num_coeffs=[...];den_coeffs=[...]": pairs
  // (t_exp,coeff) in univariate mode, triples (t_exp,q_exp,coeff) in
  // bivariate mode.  Exact round-trip via parse (numeric q, if any, is
  // supplied out of band by the caller).
  std::string serialize() const;
  static SymbolicPGF parse(const std::string& text,
                           std::optional<ExactRational> numeric_q = std::nullopt);

private:
  SymbolicPGF() = default;
  Poly num_, den_;
  std::optional<ExactRational> numeric_q_;
};

// One geometric-series factor 1 - q^q_exp * t^t_exp of a denominator.
struct GeoFactor {
  std::int64_t q_exp = 0;
  std::int64_t t_exp = 0;
  friend bool operator==(const GeoFactor&, const GeoFactor&) = default;
  friend auto operator<=>(const GeoFactor&, const GeoFactor&) = default;
};

// coef * (1-q)^p_pow * q^q_pow * t^t_pow / prod_i (1 - q^{a_i} t^{b_i})
struct FactoredPGF {
  ExactRational coef = ExactRational(1);
  std::int64_t p_pow = 0;
  std::int64_t q_pow = 0;
  std::int64_t t_pow = 0;
  std::vector<GeoFactor> denom;

  double eval(double q, double t) const;
  ExactRational eval_exact(const ExactRational& q, const ExactRational& t) const;
  // Value, first and second t-derivative at t=1 (log-derivative form).
  double value_at_one(double q) const;
  double d1_at_one(double q) const;
  double d2_at_one(double q) const;
};

// A finite sum of factored terms (e.g. one per ordering domain).
class FactoredSum {
public:
  FactoredSum() = default;
  explicit FactoredSum(std::vector<FactoredPGF> parts) : parts_(std::move(parts)) {}

  const std::vector<FactoredPGF>& parts() const { return parts_; }
  void add(FactoredPGF part) { parts_.push_back(std::move(part)); }
  std::size_t size() const { return parts_.size(); }

  double eval(double q, double t) const;
  ExactRational eval_exact(const ExactRational& q, const ExactRational& t) const;
  double mean(double q) const;      // G'(1)
  double variance(double q) const;  // G''(1) + G'(1) - G'(1)^2
  ExactRational mean_exact(const ExactRational& q) const;

  // Expand into a single num/den pair over the least common multiple of the
  // factor multisets, cancel denominator factors that divide the numerator,
  // and hand the result to SymbolicPGF::make.  With numeric_q set the
  // expansion happens with q substituted (much smaller intermediates).
  SymbolicPGF to_symbolic(std::optional<ExactRational> numeric_q = std::nullopt) const;

private:
  std::vector<FactoredPGF> parts_;
};

}  // namespace rpgf

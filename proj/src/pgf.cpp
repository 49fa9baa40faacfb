#include "repeaterpgf/pgf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rpgf {

namespace {

Poly one_minus_t() {
  Poly p = Poly::one();
  p.add_term(1, 0, ExactRational(-1));
  return p;
}

// 1 - q^a t^b, with q substituted when numeric_q is set.
Poly factor_poly(const GeoFactor& f, const std::optional<ExactRational>& numeric_q) {
  Poly p = Poly::one();
  if (numeric_q) {
    p.add_term(f.t_exp, 0, -numeric_q->pow(f.q_exp));
  } else {
    p.add_term(f.t_exp, f.q_exp, ExactRational(-1));
  }
  return p;
}

void strip_common_monomial(Poly& num, Poly& den) {
  auto min_exps = [](const Poly& p) {
    std::int64_t mt = -1, mq = -1;
    for (const auto& [k, c] : p.terms()) {
      mt = (mt < 0) ? k.first : std::min(mt, k.first);
      mq = (mq < 0) ? k.second : std::min(mq, k.second);
    }
    return std::pair<std::int64_t, std::int64_t>{std::max<std::int64_t>(mt, 0),
                                                 std::max<std::int64_t>(mq, 0)};
  };
  auto [nt, nq] = min_exps(num);
  auto [dt, dq] = min_exps(den);
  const std::int64_t st = std::min(nt, dt), sq = std::min(nq, dq);
  if (st == 0 && sq == 0) return;
  auto shift = [&](const Poly& p) {
    Poly out;
    for (const auto& [k, c] : p.terms()) out.add_term(k.first - st, k.second - sq, c);
    return out;
  };
  num = shift(num);
  den = shift(den);
}

}  // namespace

SymbolicPGF SymbolicPGF::make(Poly num, Poly den, std::optional<ExactRational> numeric_q) {
  if (numeric_q) {
    num = num.substitute_q(*numeric_q);
    den = den.substitute_q(*numeric_q);
  }
  if (den.is_zero()) throw std::domain_error("SymbolicPGF: zero denominator");
  strip_common_monomial(num, den);
  const Poly omt = one_minus_t();
  while (true) {
    auto n2 = num.divide_exact(omt);
    if (!n2) break;
    auto d2 = den.divide_exact(omt);
    if (!d2) break;
    num = std::move(*n2);
    den = std::move(*d2);
  }
  normalize_pair(num, den);
  const Poly den_at_1 = den.substitute_t(ExactRational(1));
  if (den_at_1.is_zero()) {
    throw std::domain_error("SymbolicPGF: denominator vanishes at t=1 (uncancelled singularity)");
  }
  SymbolicPGF g;
  g.num_ = std::move(num);
  g.den_ = std::move(den);
  g.numeric_q_ = std::move(numeric_q);
  return g;
}

SymbolicPGF SymbolicPGF::with_numeric_q(const ExactRational& q) const {
  if (!is_bivariate()) throw std::logic_error("SymbolicPGF: q already numeric");
  return make(num_, den_, q);
}

double SymbolicPGF::eval(double t) const {
  if (!num_.is_univariate_t() || !den_.is_univariate_t()) {
    throw std::logic_error("SymbolicPGF::eval: symbolic q present; use eval_qt");
  }
  return eval_qt(0.0, t);
}

double SymbolicPGF::eval_qt(double q, double t) const {
  const double d = den_.eval_double(q, t);
  if (d == 0.0) throw std::domain_error("SymbolicPGF: denominator vanishes at evaluation point");
  return num_.eval_double(q, t) / d;
}

ExactRational SymbolicPGF::eval_exact(const ExactRational& t) const {
  if (!num_.is_univariate_t() || !den_.is_univariate_t()) {
    throw std::logic_error("SymbolicPGF::eval_exact: symbolic q present");
  }
  const ExactRational q0(0);
  const ExactRational d = den_.eval(q0, t);
  if (d.is_zero()) throw std::domain_error("SymbolicPGF: denominator vanishes at evaluation point");
  return num_.eval(q0, t) / d;
}

namespace {
struct Derivs {
  ExactRational f0, f1, f2;  // value, first and second derivative at t=1
};
Derivs at_one(const Poly& p) {
  const ExactRational q0(0), t1(1);
  return {p.eval(q0, t1), p.derivative_t().eval(q0, t1),
          p.derivative_t().derivative_t().eval(q0, t1)};
}
}  // namespace

ExactRational SymbolicPGF::mean_exact() const {
  if (!num_.is_univariate_t() || !den_.is_univariate_t()) {
    throw std::logic_error("SymbolicPGF::mean_exact: symbolic q present");
  }
  const Derivs n = at_one(num_), d = at_one(den_);
  return (n.f1 * d.f0 - n.f0 * d.f1) / (d.f0 * d.f0);
}

ExactRational SymbolicPGF::variance_exact() const {
  if (!num_.is_univariate_t() || !den_.is_univariate_t()) {
    throw std::logic_error("SymbolicPGF::variance_exact: symbolic q present");
  }
  const Derivs n = at_one(num_), d = at_one(den_);
  const ExactRational d0sq = d.f0 * d.f0;
  const ExactRational g1 = (n.f1 * d.f0 - n.f0 * d.f1) / d0sq;
  const ExactRational g2 = n.f2 / d.f0 - (ExactRational(2) * n.f1 * d.f1 + n.f0 * d.f2) / d0sq +
                           ExactRational(2) * n.f0 * d.f1 * d.f1 / (d0sq * d.f0);
  return g2 + g1 - g1 * g1;
}

std::pair<Poly, Poly> SymbolicPGF::mean_in_q() const {
  const ExactRational t1(1);
  const Poly n0 = num_.substitute_t(t1);
  const Poly d0 = den_.substitute_t(t1);
  const Poly n1 = num_.derivative_t().substitute_t(t1);
  const Poly d1 = den_.derivative_t().substitute_t(t1);
  Poly top = n1 * d0 - n0 * d1;
  Poly bot = d0 * d0;
  normalize_pair(top, bot);
  return {top, bot};
}

double SymbolicPGF::exp_moment(double alpha, int k) const {
  if (alpha < 0.0) throw std::domain_error("SymbolicPGF::exp_moment: alpha must be >= 0");
  if (k < 1) throw std::domain_error("SymbolicPGF::exp_moment: k must be >= 1");
  return eval(std::exp(-static_cast<double>(k) * alpha));
}

std::vector<ExactRational> SymbolicPGF::series(std::size_t order) const {
  if (!num_.is_univariate_t() || !den_.is_univariate_t()) {
    throw std::logic_error("SymbolicPGF::series: symbolic q present");
  }
  const ExactRational d0 = den_.coeff(0, 0);
  if (d0.is_zero()) throw std::domain_error("SymbolicPGF::series: denominator has no constant term");
  std::vector<ExactRational> c(order + 1, ExactRational(0));
  for (std::size_t k = 0; k <= order; ++k) {
    ExactRational acc = num_.coeff(static_cast<std::int64_t>(k), 0);
    for (std::size_t j = 1; j <= k; ++j) {
      const ExactRational dj = den_.coeff(static_cast<std::int64_t>(j), 0);
      if (!dj.is_zero()) acc -= dj * c[k - j];
    }
    c[k] = acc / d0;
  }
  return c;
}

bool SymbolicPGF::symbolic_equal(const SymbolicPGF& a, const SymbolicPGF& b) {
  if (a.is_bivariate() != b.is_bivariate()) {
    throw std::logic_error("SymbolicPGF::symbolic_equal: mixed variable modes");
  }
  if (!a.is_bivariate() && *a.numeric_q_ != *b.numeric_q_) {
    throw std::logic_error("SymbolicPGF::symbolic_equal: different numeric q");
  }
  return a.num_ * b.den_ == b.num_ * a.den_;
}

namespace {
std::string poly_coeff_list(const Poly& p, bool pairs) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [k, c] : p.terms()) {
    if (!first) os << ",";
    first = false;
    if (pairs) {
      os << "(" << k.first << "," << c.to_string() << ")";
    } else {
      os << "(" << k.first << "," << k.second << "," << c.to_string() << ")";
    }
  }
  os << "]";
  return os.str();
}

Poly parse_coeff_list(const std::string& s) {
  // Accepts both (t_exp,coeff) pairs and (t_exp,q_exp,coeff) triples.
  Poly out;
  std::size_t i = 0;
  auto fail = [&](const char* why) {
    throw std::invalid_argument(std::string("SymbolicPGF::parse: ") + why);
  };
  while (i < s.size() && s[i] != '[') ++i;
  if (i >= s.size()) fail("expected '['");
  ++i;
  while (i < s.size() && s[i] != ']') {
    while (i < s.size() && (s[i] == ',' || std::isspace(static_cast<unsigned char>(s[i])))) ++i;
    if (i < s.size() && s[i] == ']') break;
    if (i >= s.size() || s[i] != '(') fail("expected '('");
    ++i;
    std::vector<std::string> fields(1);
    while (i < s.size() && s[i] != ')') {
      if (s[i] == ',') {
        fields.emplace_back();
      } else {
        fields.back() += s[i];
      }
      ++i;
    }
    if (i >= s.size()) fail("unterminated term");
    ++i;  // ')'
    if (fields.size() == 2) {
      out.add_term(std::stoll(fields[0]), 0, ExactRational::from_string(fields[1]));
    } else if (fields.size() == 3) {
      out.add_term(std::stoll(fields[0]), std::stoll(fields[1]),
                   ExactRational::from_string(fields[2]));
    } else {
      fail("term must have 2 or 3 fields");
    }
  }
  return out;
}
}  // namespace

std::string SymbolicPGF::serialize() const {
  const bool pairs = !is_bivariate();
  return "num_coeffs=" + poly_coeff_list(num_, pairs) +
         ";den_coeffs=" + poly_coeff_list(den_, pairs);
}

SymbolicPGF SymbolicPGF::parse(const std::string& text, std::optional<ExactRational> numeric_q) {
  const std::string num_tag = "num_coeffs=";
  const std::string den_tag = "den_coeffs=";
  const auto npos = text.find(num_tag);
  const auto semi = text.find(';', npos == std::string::npos ? 0 : npos);
  const auto dpos = text.find(den_tag);
  if (npos == std::string::npos || dpos == std::string::npos || semi == std::string::npos) {
    throw std::invalid_argument("SymbolicPGF::parse: expected num_coeffs=[...];den_coeffs=[...]");
  }
  Poly num = parse_coeff_list(text.substr(npos + num_tag.size(), semi - npos - num_tag.size()));
  Poly den = parse_coeff_list(text.substr(dpos + den_tag.size()));
  return make(std::move(num), std::move(den), std::move(numeric_q));
}

// ---------------------------------------------------------------------------
// FactoredPGF / FactoredSum

double FactoredPGF::eval(double q, double t) const {
  double v = coef.to_double() * std::pow(1.0 - q, static_cast<double>(p_pow)) *
             std::pow(q, static_cast<double>(q_pow)) * std::pow(t, static_cast<double>(t_pow));
  for (const auto& f : denom) {
    v /= 1.0 - std::pow(q, static_cast<double>(f.q_exp)) * std::pow(t, static_cast<double>(f.t_exp));
  }
  return v;
}

ExactRational FactoredPGF::eval_exact(const ExactRational& q, const ExactRational& t) const {
  ExactRational v = coef * (ExactRational(1) - q).pow(p_pow) * q.pow(q_pow) * t.pow(t_pow);
  for (const auto& f : denom) {
    v /= ExactRational(1) - q.pow(f.q_exp) * t.pow(f.t_exp);
  }
  return v;
}

double FactoredPGF::value_at_one(double q) const {
  double v = coef.to_double() * std::pow(1.0 - q, static_cast<double>(p_pow)) *
             std::pow(q, static_cast<double>(q_pow));
  for (const auto& f : denom) v /= 1.0 - std::pow(q, static_cast<double>(f.q_exp));
  return v;
}

namespace {
// First and second derivative of log f at t=1 for a factored term.
std::pair<double, double> log_derivs_at_one(const FactoredPGF& g, double q) {
  double s1 = static_cast<double>(g.t_pow);
  double s2 = -static_cast<double>(g.t_pow);
  for (const auto& f : g.denom) {
    const double u = std::pow(q, static_cast<double>(f.q_exp));
    const double b = static_cast<double>(f.t_exp);
    const double denom = 1.0 - u;
    s1 += b * u / denom;
    s2 += b * u * ((b - 1.0) * denom + b * u) / (denom * denom);
  }
  return {s1, s2};
}
}  // namespace

double FactoredPGF::d1_at_one(double q) const {
  return value_at_one(q) * log_derivs_at_one(*this, q).first;
}

double FactoredPGF::d2_at_one(double q) const {
  const auto [s1, s2] = log_derivs_at_one(*this, q);
  return value_at_one(q) * (s2 + s1 * s1);
}

double FactoredSum::eval(double q, double t) const {
  double acc = 0.0;
  for (const auto& g : parts_) acc += g.eval(q, t);
  return acc;
}

ExactRational FactoredSum::eval_exact(const ExactRational& q, const ExactRational& t) const {
  ExactRational acc(0);
  for (const auto& g : parts_) acc += g.eval_exact(q, t);
  return acc;
}

double FactoredSum::mean(double q) const {
  double acc = 0.0;
  for (const auto& g : parts_) acc += g.d1_at_one(q);
  return acc;
}

double FactoredSum::variance(double q) const {
  double d1 = 0.0, d2 = 0.0;
  for (const auto& g : parts_) {
    d1 += g.d1_at_one(q);
    d2 += g.d2_at_one(q);
  }
  return d2 + d1 - d1 * d1;
}

ExactRational FactoredSum::mean_exact(const ExactRational& q) const {
  // Exact counterpart of mean(): sum of f(1) * (d/dt log f)(1) per term.
  ExactRational acc(0);
  const ExactRational one(1);
  for (const auto& g : parts_) {
    ExactRational v = g.coef * (one - q).pow(g.p_pow) * q.pow(g.q_pow);
    ExactRational s1(g.t_pow);
    for (const auto& f : g.denom) {
      const ExactRational u = q.pow(f.q_exp);
      v /= one - u;
      s1 += ExactRational(f.t_exp) * u / (one - u);
    }
    acc += v * s1;
  }
  return acc;
}

SymbolicPGF FactoredSum::to_symbolic(std::optional<ExactRational> numeric_q) const {
  if (parts_.empty()) throw std::logic_error("FactoredSum::to_symbolic: empty sum");
  const std::int64_t p_pow = parts_.front().p_pow;
  for (const auto& g : parts_) {
    if (g.p_pow != p_pow) throw std::logic_error("FactoredSum::to_symbolic: mixed p powers");
  }

  using FactorMap = std::map<GeoFactor, int>;
  auto to_map = [](const std::vector<GeoFactor>& v) {
    FactorMap m;
    for (const auto& f : v) ++m[f];
    return m;
  };
  auto expand = [&](const FactorMap& m) {
    Poly out = Poly::one();
    for (const auto& [f, mult] : m) {
      out *= factor_poly(f, numeric_q).pow(static_cast<std::uint64_t>(mult));
    }
    return out;
  };

  // Group terms sharing a denominator multiset: their numerators add freely.
  std::map<FactorMap, Poly> groups;
  for (const auto& g : parts_) {
    Poly mono;
    if (numeric_q) {
      mono = Poly::term(g.coef * numeric_q->pow(g.q_pow), g.t_pow, 0);
    } else {
      mono = Poly::term(g.coef, g.t_pow, g.q_pow);
    }
    auto [it, fresh] = groups.try_emplace(to_map(g.denom), mono);
    if (!fresh) it->second += mono;
  }

  Poly num = Poly::zero();
  FactorMap den;
  for (const auto& [gden, gnum] : groups) {
    FactorMap target = den;
    for (const auto& [f, mult] : gden) {
      target[f] = std::max(target[f], mult);
    }
    FactorMap miss_sum, miss_grp;
    for (const auto& [f, mult] : target) {
      const auto itd = den.find(f);
      const int have_sum = itd == den.end() ? 0 : itd->second;
      if (mult > have_sum) miss_sum[f] = mult - have_sum;
      const auto itg = gden.find(f);
      const int have_grp = itg == gden.end() ? 0 : itg->second;
      if (mult > have_grp) miss_grp[f] = mult - have_grp;
    }
    num = num * expand(miss_sum) + gnum * expand(miss_grp);
    den = std::move(target);
  }

  // Prefactor p^n = (1-q)^n joins the numerator before cancellation.
  if (numeric_q) {
    num = num * (ExactRational(1) - *numeric_q).pow(p_pow);
  } else {
    Poly p = Poly::one();
    p.add_term(0, 1, ExactRational(-1));
    num *= p.pow(static_cast<std::uint64_t>(p_pow));
  }

  // Cancel denominator factors dividing the numerator.
  FactorMap reduced;
  for (auto& [f, mult] : den) {
    const Poly fp = factor_poly(f, numeric_q);
    while (mult > 0) {
      auto d = num.divide_exact(fp);
      if (!d) break;
      num = std::move(*d);
      --mult;
    }
    if (mult > 0) reduced[f] = mult;
  }

  return SymbolicPGF::make(std::move(num), expand(reduced), std::move(numeric_q));
}

}  // namespace rpgf

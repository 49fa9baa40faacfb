#include "repeaterpgf/poly.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace rpgf {

Poly Poly::constant(const ExactRational& c) {
  Poly p;
  if (!c.is_zero()) p.terms_[{0, 0}] = c;
  return p;
}

Poly Poly::term(const ExactRational& c, std::int64_t t_exp, std::int64_t q_exp) {
  if (t_exp < 0 || q_exp < 0) throw std::domain_error("Poly: negative exponent");
  Poly p;
  if (!c.is_zero()) p.terms_[{t_exp, q_exp}] = c;
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

std::int64_t Poly::degree_t() const {
  if (terms_.empty()) return -1;
  return terms_.rbegin()->first.first;
}

std::int64_t Poly::degree_q() const {
  std::int64_t d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k.second);
  return d;
}

ExactRational Poly::coeff(std::int64_t t_exp, std::int64_t q_exp) const {
  auto it = terms_.find({t_exp, q_exp});
  return it == terms_.end() ? ExactRational(0) : it->second;
}

Poly Poly::coeff_t(std::int64_t t_exp) const {
  Poly out;
  for (auto it = terms_.lower_bound({t_exp, 0}); it != terms_.end() && it->first.first == t_exp; ++it) {
    out.terms_[{0, it->first.second}] = it->second;
  }
  return out;
}

void Poly::add_term(std::int64_t t_exp, std::int64_t q_exp, const ExactRational& c) {
  if (t_exp < 0 || q_exp < 0) throw std::domain_error("Poly: negative exponent");
  if (c.is_zero()) return;
  Key k{t_exp, q_exp};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly out;
  for (const auto& [k, c] : terms_) out.terms_[k] = -c;
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    }
  }
  return out;
}

Poly Poly::operator*(const ExactRational& c) const {
  Poly out;
  if (c.is_zero()) return out;
  for (const auto& [k, v] : terms_) out.terms_[k] = v * c;
  return out;
}

Poly Poly::pow(std::uint64_t e) const {
  Poly acc = Poly::one();
  Poly base = *this;
  while (e > 0) {
    if (e & 1ULL) acc *= base;
    base *= base;
    e >>= 1ULL;
  }
  return acc;
}

ExactRational Poly::eval(const ExactRational& q, const ExactRational& t) const {
  // Cache powers to avoid re-exponentiation on the (typically clustered) keys.
  ExactRational acc(0);
  std::map<std::int64_t, ExactRational> tp, qp;
  auto power = [](std::map<std::int64_t, ExactRational>& cache, const ExactRational& base,
                  std::int64_t e) -> const ExactRational& {
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, base.pow(e)).first;
    return it->second;
  };
  for (const auto& [k, c] : terms_) {
    acc += c * power(tp, t, k.first) * power(qp, q, k.second);
  }
  return acc;
}

double Poly::eval_double(double q, double t) const {
  double acc = 0.0;
  for (const auto& [k, c] : terms_) {
    acc += c.to_double() * std::pow(t, static_cast<double>(k.first)) *
           std::pow(q, static_cast<double>(k.second));
  }
  return acc;
}

Poly Poly::substitute_q(const ExactRational& q) const {
  Poly out;
  std::map<std::int64_t, ExactRational> qp;
  for (const auto& [k, c] : terms_) {
    auto it = qp.find(k.second);
    if (it == qp.end()) it = qp.emplace(k.second, q.pow(k.second)).first;
    out.add_term(k.first, 0, c * it->second);
  }
  return out;
}

Poly Poly::substitute_t(const ExactRational& t) const {
  Poly out;
  std::map<std::int64_t, ExactRational> tp;
  for (const auto& [k, c] : terms_) {
    auto it = tp.find(k.first);
    if (it == tp.end()) it = tp.emplace(k.first, t.pow(k.first)).first;
    out.add_term(0, k.second, c * it->second);
  }
  return out;
}

Poly Poly::substitute_t_power(std::int64_t k) const {
  if (k < 1) throw std::domain_error("Poly: t -> t^k needs k >= 1");
  Poly out;
  for (const auto& [key, c] : terms_) out.terms_[{key.first * k, key.second}] = c;
  return out;
}

Poly Poly::derivative_t() const {
  Poly out;
  for (const auto& [k, c] : terms_) {
    if (k.first > 0) out.terms_[{k.first - 1, k.second}] = c * ExactRational(k.first);
  }
  return out;
}

Poly Poly::derivative_q() const {
  Poly out;
  for (const auto& [k, c] : terms_) {
    if (k.second > 0) out.terms_[{k.first, k.second - 1}] = c * ExactRational(k.second);
  }
  return out;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
  Poly r = *this;
  Poly quot;
  const auto& [dk, dc] = *d.terms_.rbegin();  // leading term under (t,q)-lex
  while (!r.is_zero()) {
    const auto& [rk, rc] = *r.terms_.rbegin();
    if (rk.first < dk.first || rk.second < dk.second) return std::nullopt;
    Poly m = Poly::term(rc / dc, rk.first - dk.first, rk.second - dk.second);
    quot += m;
    r -= m * d;
  }
  return quot;
}

bool Poly::is_univariate_t() const {
  for (const auto& [k, c] : terms_) {
    if (k.second != 0) return false;
  }
  return true;
}

bool Poly::is_univariate_q() const {
  for (const auto& [k, c] : terms_) {
    if (k.first != 0) return false;
  }
  return true;
}

std::string Poly::to_string() const {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << ",";
    first = false;
    os << "(" << k.first << "," << k.second << "," << c.to_string() << ")";
  }
  os << "]";
  return os.str();
}

Poly Poly::parse(const std::string& s) {
  Poly out;
  std::size_t i = 0;
  auto fail = [&](const char* why) {
    throw std::invalid_argument(std::string("Poly::parse: ") + why + " at offset " +
                                std::to_string(i) + " in \"" + s + "\"");
  };
  auto skip_ws = [&] { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; };
  skip_ws();
  if (i >= s.size() || s[i] != '[') fail("expected '['");
  ++i;
  skip_ws();
  if (i < s.size() && s[i] == ']') return out;
  while (true) {
    skip_ws();
    if (i >= s.size() || s[i] != '(') fail("expected '('");
    ++i;
    auto read_until = [&](char stop) {
      std::string tok;
      while (i < s.size() && s[i] != stop) tok += s[i++];
      if (i >= s.size()) fail("unterminated term");
      ++i;  // consume stop
      return tok;
    };
    const std::string te = read_until(',');
    const std::string qe = read_until(',');
    const std::string co = read_until(')');
    out.add_term(std::stoll(te), std::stoll(qe), ExactRational::from_string(co));
    skip_ws();
    if (i < s.size() && s[i] == ',') { ++i; continue; }
    if (i < s.size() && s[i] == ']') break;
    fail("expected ',' or ']'");
  }
  return out;
}

void normalize_pair(Poly& num, Poly& den) {
  if (den.is_zero()) throw std::domain_error("normalize_pair: zero denominator");
  // Scale by the lcm of all coefficient denominators, then divide by the gcd
  // of all coefficient numerators.
  BigInt lcm = 1;
  auto fold_lcm = [&](const Poly& p) {
    for (const auto& [k, c] : p.terms()) {
      BigInt d = c.denominator();
      lcm = lcm / gcd(lcm, d) * d;
    }
  };
  fold_lcm(num);
  fold_lcm(den);
  BigInt g = 0;
  auto fold_gcd = [&](const Poly& p) {
    for (const auto& [k, c] : p.terms()) {
      g = gcd(g, BigInt(c.numerator() * (lcm / c.denominator())));
    }
  };
  fold_gcd(num);
  fold_gcd(den);
  if (g == 0) g = 1;
  ExactRational scale(lcm, g);
  if (den.terms().begin()->second.sign() < 0) scale = -scale;
  num = num * scale;
  den = den * scale;
}

}  // namespace rpgf

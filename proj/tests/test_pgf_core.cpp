// Core tests for exact rationals, sparse polynomials and symbolic PGFs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "repeaterpgf/pgf.hpp"
#include "repeaterpgf/poly.hpp"
#include "repeaterpgf/rational.hpp"

using rpgf::ExactRational;
using rpgf::FactoredPGF;
using rpgf::FactoredSum;
using rpgf::Poly;
using rpgf::SymbolicPGF;

namespace {

ExactRational rat(long long n, long long d) { return ExactRational(n, d); }

// G(t) = p t / (1 - q t) with numeric p.
SymbolicPGF geometric_numeric(const ExactRational& p) {
  const ExactRational q = ExactRational(1) - p;
  Poly num = Poly::term(p, 1);
  Poly den = Poly::one();
  den.add_term(1, 0, -q);
  return SymbolicPGF::make(num, den, q);
}

// Same PGF kept symbolic in q (p = 1 - q).
SymbolicPGF geometric_bivariate() {
  Poly num = Poly::term(ExactRational(1), 1, 0);
  num.add_term(1, 1, ExactRational(-1));
  Poly den = Poly::one();
  den.add_term(1, 1, ExactRational(-1));
  return SymbolicPGF::make(num, den);
}

}  // namespace

TEST_CASE("rational arithmetic and normalization") {
  CHECK(rat(1, 2) + rat(1, 3) == rat(5, 6));
  CHECK(rat(2, 4) == rat(1, 2));
  CHECK(rat(-3, -6) == rat(1, 2));
  CHECK(rat(3, -6) == rat(-1, 2));
  CHECK(rat(1, 2) * rat(2, 3) == rat(1, 3));
  CHECK(rat(1, 2) / rat(1, 4) == ExactRational(2));
  CHECK(rat(2, 3).pow(3) == rat(8, 27));
  CHECK(rat(2, 3).pow(-2) == rat(9, 4));
  CHECK(rat(2, 3).pow(0) == ExactRational(1));
  CHECK(ExactRational(0).pow(0) == ExactRational(1));
  CHECK(rat(-5, 7).abs() == rat(5, 7));
  CHECK(rat(-5, 7).sign() == -1);
  CHECK(rat(7, 3).inverse() == rat(3, 7));
  CHECK(ExactRational::from_string("-22/7") == rat(-22, 7));
  CHECK(ExactRational::from_string("42") == ExactRational(42));
  CHECK(rat(-22, 7).to_string() == "-22/7");
  CHECK(ExactRational(5).to_string() == "5");
  CHECK(rat(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(rat(1, 2) < rat(2, 3));
  CHECK_THROWS_AS(ExactRational(1, 0), std::domain_error);
  CHECK_THROWS_AS(rat(1, 2) / ExactRational(0), std::domain_error);
}

TEST_CASE("polynomial arithmetic") {
  Poly a = Poly::one();
  a.add_term(1, 0, ExactRational(1));  // 1 + t
  Poly b = Poly::one();
  b.add_term(1, 0, ExactRational(-1));  // 1 - t
  Poly prod = a * b;                    // 1 - t^2
  CHECK(prod.coeff(0) == ExactRational(1));
  CHECK(prod.coeff(1) == ExactRational(0));
  CHECK(prod.coeff(2) == ExactRational(-1));
  CHECK(prod.term_count() == 2);
  CHECK(prod.degree_t() == 2);

  SUBCASE("cancellation removes zero terms") {
    Poly z = a - a;
    CHECK(z.is_zero());
    CHECK(z.degree_t() == -1);
  }

  SUBCASE("exact division") {
    auto q = prod.divide_exact(b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
    Poly c = Poly::one();
    c.add_term(1, 0, ExactRational(2));  // 1 + 2t does not divide 1 - t^2
    CHECK(!prod.divide_exact(c).has_value());
  }

  SUBCASE("bivariate multiplication and evaluation") {
    Poly f = Poly::term(ExactRational(1), 1, 1);  // q t
    f.add_term(0, 2, ExactRational(3));           // + 3 q^2
    Poly g = f * f;
    CHECK(g.coeff(2, 2) == ExactRational(1));
    CHECK(g.coeff(1, 3) == ExactRational(6));
    CHECK(g.coeff(0, 4) == ExactRational(9));
    CHECK(f.eval(rat(1, 2), rat(1, 3)) == rat(1, 6) + rat(3, 4));
    CHECK(f.eval_double(0.5, 1.0 / 3.0) ==
          doctest::Approx((rat(1, 6) + rat(3, 4)).to_double()).epsilon(1e-14));
  }

  SUBCASE("derivatives") {
    Poly f = Poly::term(rat(3, 2), 2, 1);  // (3/2) t^2 q
    Poly dt = f.derivative_t();
    CHECK(dt.coeff(1, 1) == ExactRational(3));
    Poly dq = f.derivative_q();
    CHECK(dq.coeff(2, 0) == rat(3, 2));
  }

  SUBCASE("substitutions") {
    Poly f = Poly::one();
    f.add_term(1, 0, ExactRational(1));  // 1 + t
    Poly f2 = f.substitute_t_power(2);   // 1 + t^2
    CHECK(f2.coeff(2) == ExactRational(1));
    CHECK(f2.coeff(1) == ExactRational(0));
    Poly g = Poly::term(ExactRational(1), 1, 2);       // t q^2
    CHECK(g.substitute_q(rat(1, 2)).coeff(1, 0) == rat(1, 4));
    CHECK(g.substitute_t(rat(1, 3)).coeff(0, 2) == rat(1, 3));
  }

  SUBCASE("serialization round trip") {
    Poly f = Poly::term(rat(-7, 3), 4, 2);
    f.add_term(0, 0, rat(1, 2));
    Poly back = Poly::parse(f.to_string());
    CHECK(back == f);
  }
}

TEST_CASE("geometric pgf exact moments and series") {
  const ExactRational p = rat(1, 2);
  SymbolicPGF g = geometric_numeric(p);

  CHECK(g.eval_exact(ExactRational(1)) == ExactRational(1));
  CHECK(g.mean_exact() == ExactRational(2));        // 1/p
  CHECK(g.variance_exact() == ExactRational(2));    // q/p^2

  auto c = g.series(12);
  CHECK(c[0] == ExactRational(0));
  CHECK(c[3] == rat(1, 8));  // P(X=3) = p q^2 = 1/8
  for (std::size_t k = 1; k < c.size(); ++k) {
    CHECK(c[k] == p * (ExactRational(1) - p).pow(static_cast<long long>(k - 1)));
  }
}

TEST_CASE("pgf series coefficients stay nonnegative") {
  for (long long num : {9, 5, 1}) {
    const ExactRational p = rat(num, 10);
    SymbolicPGF g = geometric_numeric(p);
    // Sum of two independent copies: product of PGFs.
    SymbolicPGF g2 = SymbolicPGF::make(g.num() * g.num(), g.den() * g.den(),
                                       ExactRational(1) - p);
    for (const auto& pgf : {g, g2}) {
      auto c = pgf.series(50);
      ExactRational total(0);
      for (const auto& ck : c) {
        CHECK(ck >= ExactRational(0));
        total += ck;
      }
      CHECK(total <= ExactRational(1));
    }
  }
}

TEST_CASE("removable singularity cancellation") {
  const ExactRational p = rat(3, 10), q = rat(7, 10);
  // p t (1 - t) / ((1 - q t)(1 - t)) must reduce to the plain geometric PGF.
  Poly omt = Poly::one();
  omt.add_term(1, 0, ExactRational(-1));
  Poly den_base = Poly::one();
  den_base.add_term(1, 0, -q);
  SymbolicPGF g = SymbolicPGF::make(Poly::term(p, 1) * omt, den_base * omt, q);
  CHECK(SymbolicPGF::symbolic_equal(g, geometric_numeric(p)));
  CHECK(g.mean_exact() == rat(10, 3));
}

TEST_CASE("invalid pgfs are rejected") {
  Poly omt = Poly::one();
  omt.add_term(1, 0, ExactRational(-1));
  CHECK_THROWS_AS(SymbolicPGF::make(Poly::term(ExactRational(1), 2), omt, rat(1, 2)),
                  std::domain_error);
  CHECK_THROWS_AS(SymbolicPGF::make(Poly::one(), Poly::zero(), rat(1, 2)),
                  std::domain_error);
}

TEST_CASE("exp moment monotone in alpha and k") {
  SymbolicPGF g = geometric_numeric(rat(1, 4));
  double prev = 1.0;
  for (double alpha : {0.001, 0.01, 0.1, 0.5, 1.0, 3.0}) {
    const double v = g.exp_moment(alpha);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  for (int k = 2; k <= 5; ++k) {
    CHECK(g.exp_moment(0.2, k) < g.exp_moment(0.2, k - 1));
  }
  CHECK(g.exp_moment(0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pgf serialization round trip") {
  SUBCASE("numeric q uses exponent/coefficient pairs") {
    SymbolicPGF g = geometric_numeric(rat(1, 3));
    const std::string text = g.serialize();
    CHECK(text.find("num_coeffs=[") == 0);
    CHECK(text.find(";den_coeffs=[") != std::string::npos);
    SymbolicPGF back = SymbolicPGF::parse(text, rat(2, 3));
    CHECK(SymbolicPGF::symbolic_equal(g, back));
    CHECK(back.serialize() == text);
  }
  SUBCASE("bivariate form round trips through triples") {
    SymbolicPGF g = geometric_bivariate();
    SymbolicPGF back = SymbolicPGF::parse(g.serialize());
    CHECK(SymbolicPGF::symbolic_equal(g, back));
    CHECK(back.serialize() == g.serialize());
  }
}

TEST_CASE("bivariate pgf mean as function of q") {
  SymbolicPGF g = geometric_bivariate();
  auto [num_q, den_q] = g.mean_in_q();
  // Mean is 1/(1-q): cross-check num * (1-q) == den.
  Poly omq = Poly::one();
  omq.add_term(0, 1, ExactRational(-1));
  CHECK(num_q * omq == den_q);

  SymbolicPGF gn = g.with_numeric_q(rat(1, 2));
  CHECK(gn.mean_exact() == ExactRational(2));
  CHECK(gn.variance_exact() == ExactRational(2));
  CHECK(SymbolicPGF::symbolic_equal(gn, geometric_numeric(rat(1, 2))));
}

TEST_CASE("finite support pgf moments") {
  // G(t) = (t + t^2)/2: mean 3/2, variance 1/4.
  Poly num = Poly::term(rat(1, 2), 1);
  num.add_term(2, 0, rat(1, 2));
  SymbolicPGF g = SymbolicPGF::make(num, Poly::one(), rat(1, 2));
  CHECK(g.mean_exact() == rat(3, 2));
  CHECK(g.variance_exact() == rat(1, 4));
  CHECK(g.eval_exact(ExactRational(1)) == ExactRational(1));
}

TEST_CASE("factored form matches expanded form") {
  // Geometric as a factored term: p t / (1 - q t).
  FactoredPGF f;
  f.p_pow = 1;
  f.t_pow = 1;
  f.denom.push_back({1, 1});
  FactoredSum sum;
  sum.add(f);

  const double q = 0.7, p = 0.3;
  CHECK(sum.eval(q, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sum.mean(q) == doctest::Approx(1.0 / p).epsilon(1e-13));
  CHECK(sum.variance(q) == doctest::Approx(q / (p * p)).epsilon(1e-12));
  CHECK(sum.mean_exact(rat(7, 10)) == rat(10, 3));
  CHECK(sum.eval_exact(rat(7, 10), rat(1, 2)) ==
        geometric_numeric(rat(3, 10)).eval_exact(rat(1, 2)));

  SymbolicPGF direct = geometric_bivariate();
  CHECK(SymbolicPGF::symbolic_equal(sum.to_symbolic(), direct));
  CHECK(SymbolicPGF::symbolic_equal(sum.to_symbolic(rat(7, 10)),
                                    geometric_numeric(rat(3, 10))));
}

TEST_CASE("factored sum recombination over mixed denominators") {
  // p t/(1 - q^2 t^2) + p q t^2/(1 - q^2 t^2) == p t/(1 - q t).
  FactoredPGF a;
  a.p_pow = 1;
  a.t_pow = 1;
  a.denom.push_back({2, 2});
  FactoredPGF b;
  b.p_pow = 1;
  b.q_pow = 1;
  b.t_pow = 2;
  b.denom.push_back({2, 2});
  FactoredSum sum;
  sum.add(a);
  sum.add(b);
  CHECK(SymbolicPGF::symbolic_equal(sum.to_symbolic(), geometric_bivariate()));
  CHECK(sum.mean(0.5) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(sum.variance(0.5) == doctest::Approx(2.0).epsilon(1e-13));

  // Repeated factor: (p t/(1-q t))^2 has mean 2/p and variance 2q/p^2.
  FactoredPGF c;
  c.p_pow = 2;
  c.t_pow = 2;
  c.denom.push_back({1, 1});
  c.denom.push_back({1, 1});
  FactoredSum seq;
  seq.add(c);
  CHECK(seq.mean(0.75) == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(seq.variance(0.75) == doctest::Approx(2.0 * 0.75 / 0.0625).epsilon(1e-12));
  auto sym = seq.to_symbolic(rat(3, 4));
  CHECK(sym.mean_exact() == ExactRational(8));
  CHECK(sym.variance_exact() == ExactRational(24));
}

TEST_CASE("pgf matches direct monte carlo sampling") {
  std::mt19937_64 rng(20240817u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double p : {0.9, 0.5, 0.1, 0.01}) {
    SymbolicPGF g = geometric_numeric(ExactRational(static_cast<long long>(p * 100), 100));
    const std::size_t n = 1000000;
    const double lq = std::log1p(-p);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += std::ceil(std::log(1.0 - unif(rng)) / lq);
    }
    const double sample_mean = sum / static_cast<double>(n);
    const double sigma = std::sqrt(g.variance() / static_cast<double>(n));
    CHECK(std::abs(sample_mean - g.mean()) < 3.0 * sigma);
  }
}

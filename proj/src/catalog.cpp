#include "repeaterpgf/catalog.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "repeaterpgf/poly.hpp"

namespace rpgf {

namespace {

using i64 = std::int64_t;

BigInt binom(i64 n, i64 k) {
  if (k < 0 || k > n) return BigInt(0);
  if (k > n - k) k = n - k;
  BigInt r(1);
  for (i64 i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

// Building blocks, all with q kept symbolic and p = 1 - q.
Poly qt(i64 q_exp, i64 t_exp, long long c = 1) {
  return Poly::term(ExactRational(c), t_exp, q_exp);
}

Poly omqt(i64 q_exp, i64 t_exp) {  // 1 - q^a t^b
  Poly r = Poly::one();
  r.add_term(t_exp, q_exp, ExactRational(-1));
  return r;
}

Poly omq(i64 q_exp) { return omqt(q_exp, 0); }  // 1 - q^a

Poly psym(std::uint64_t k) { return omq(1).pow(k); }  // (1-q)^k

// Rational function in (q, t) used while assembling closed forms.
struct RF {
  Poly num = Poly::one();
  Poly den = Poly::one();

  RF& operator*=(const RF& o) {
    num *= o.num;
    den *= o.den;
    return *this;
  }
  RF subst_t_sq() const { return {num.substitute_t_power(2), den.substitute_t_power(2)}; }
  SymbolicPGF make(std::optional<ExactRational> numeric_q) const {
    return SymbolicPGF::make(num, den, std::move(numeric_q));
  }
};

RF rf(Poly num, Poly den) { return {std::move(num), std::move(den)}; }

// p t^k / (1 - q t^k)
RF geo_rf(i64 k = 1) { return rf(psym(1) * qt(0, k), omqt(1, k)); }

// Two-segment parallel dephasing |N1 - N2|: p^2 (1 + q t) / ((1-q^2)(1-q t)).
RF gtilde2_rf() {
  Poly num = psym(2);
  num *= Poly::one() + qt(1, 1);
  return rf(std::move(num), omq(2) * omqt(1, 1));
}

// max(N1, N2): p^2 t (1 + q t) / ((1-q t)(1-q^2 t)).
RF g2_par_rf() {
  Poly num = psym(2) * qt(0, 1);
  num *= Poly::one() + qt(1, 1);
  return rf(std::move(num), omqt(1, 1) * omqt(2, 1));
}

ExactRational check_p(const ExactRational& p) {
  if (p.sign() <= 0 || p > ExactRational(1)) {
    throw std::domain_error("catalog: success probability must be in (0, 1]");
  }
  return ExactRational(1) - p;
}

Poly truncated_sum(int n, i64 m) {  // sum_{j=0}^{m-n+1} C(j+n-2, n-2) q^j t^j
  Poly s = Poly::zero();
  for (i64 j = 0; j <= m - n + 1; ++j) {
    s.add_term(j, j, ExactRational(binom(j + n - 2, n - 2), BigInt(1)));
  }
  return s;
}

std::pair<RF, RF> sequential_global_cutoff_rf(int n, i64 m) {
  const Poly common = truncated_sum(n, m);
  Poly k_num = psym(static_cast<std::uint64_t>(n)) * qt(0, n) * common;
  Poly tail = Poly::zero();  // sum_{i=0}^{n-2} C(m,i) p^i q^(m-i)
  for (i64 i = 0; i <= n - 2; ++i) {
    tail += psym(static_cast<std::uint64_t>(i)) *
            Poly::term(ExactRational(binom(m, i), BigInt(1)), 0, m - i);
  }
  Poly k_den = omqt(1, 1) - psym(1) * tail * qt(0, m + 1);

  Poly d_num = qt(0, n - 1) * common;
  Poly d_den = Poly::zero();  // sum_{i=0}^{m-n+1} C(m, i+n-1) p^i q^(m-n+1-i)
  for (i64 i = 0; i <= m - n + 1; ++i) {
    d_den += psym(static_cast<std::uint64_t>(i)) *
             Poly::term(ExactRational(binom(m, i + n - 1), BigInt(1)), 0, m - n + 1 - i);
  }
  return {rf(std::move(k_num), std::move(k_den)), rf(std::move(d_num), std::move(d_den))};
}

// Truncated geometric on [1, m]: p t (1 - (q t)^m) / ((1 - q t)(1 - q^m)).
RF truncated_geo_rf(i64 m) {
  Poly num = psym(1) * (qt(0, 1) - qt(m, m + 1));
  return rf(std::move(num), omqt(1, 1) * omq(m));
}

std::pair<RF, RF> sequential_vector_cutoff_rf(int n, const CutoffVector& mv) {
  RF k = geo_rf();
  for (int j = 0; j < n - 1; ++j) {
    const i64 m = mv.m[static_cast<std::size_t>(j)];
    Poly num = psym(1) * (qt(0, 1) - qt(m, m + 1)) * k.num;
    Poly den = omqt(1, 1) * (k.den - qt(m, m) * k.num);
    k = rf(std::move(num), std::move(den));
  }
  RF d;
  for (int j = 0; j < n - 1; ++j) d *= truncated_geo_rf(mv.m[static_cast<std::size_t>(j)]);
  return {k, d};
}

std::pair<RF, RF> parallel_two_segment_cutoff_rf(i64 m) {
  Poly bracket = Poly::one() + qt(1, 1) - qt(m + 1, m + 1, 2);  // 1 + qt - 2(qt)^(m+1)
  Poly k_num = psym(2) * qt(0, 1) * bracket;
  Poly k_den = omqt(1, 1) * (omqt(2, 1) - psym(1) * qt(m + 1, m + 1, 2));
  Poly d_num = psym(1) * bracket;
  Poly d_norm = Poly::one() + qt(1, 0) - qt(m + 1, 0, 2);  // 1 + q - 2q^(m+1)
  Poly d_den = d_norm * omqt(1, 1);
  return {rf(std::move(k_num), std::move(k_den)), rf(std::move(d_num), std::move(d_den))};
}

RF parallel_K_rf(int n) {
  Poly den = Poly::one();
  for (i64 i = 1; i <= n; ++i) den *= omqt(i, 1);
  Poly num1 = Poly::zero(), num2 = den;
  for (i64 i = 1; i <= n; ++i) {
    Poly rest = Poly::one();
    for (i64 j = 1; j <= n; ++j) {
      if (j != i) rest *= omqt(j, 1);
    }
    const ExactRational c(binom(n, i), BigInt(1));
    const Poly signed_rest = (i % 2 == 1) ? rest : -rest;
    num1 += qt(0, 1) * omq(i) * signed_rest * c;
    num2 -= omqt(0, 1) * signed_rest * c;  // (1-t) * (-1)^i * C(n,i) * rest
  }
  if (num1 != num2) {
    throw std::logic_error("parallel_K_rf: the two printed forms disagree");
  }
  return rf(std::move(num1), std::move(den));
}

// Numerators of the four-segment closed forms, as (t_exp, q_exp, coeff) terms.
Poly numerator_dbl4() {
  Poly s = Poly::one();
  s.add_term(1, 2, ExactRational(1));
  s.add_term(1, 3, ExactRational(3));
  s.add_term(2, 1, ExactRational(3));
  s.add_term(2, 2, ExactRational(3));
  s.add_term(2, 5, ExactRational(-1));
  s.add_term(3, 3, ExactRational(-1));
  s.add_term(3, 5, ExactRational(1));
  s.add_term(4, 3, ExactRational(1));
  s.add_term(4, 6, ExactRational(-3));
  s.add_term(4, 7, ExactRational(-3));
  s.add_term(5, 5, ExactRational(-3));
  s.add_term(5, 6, ExactRational(-1));
  s.add_term(6, 8, ExactRational(-1));
  return s;
}

Poly numerator_itr4() {
  Poly s = Poly::one();
  s.add_term(1, 3, ExactRational(3));
  s.add_term(2, 2, ExactRational(4));
  s.add_term(2, 4, ExactRational(-1));
  s.add_term(2, 5, ExactRational(-2));
  s.add_term(3, 1, ExactRational(1));
  s.add_term(3, 2, ExactRational(-1));
  s.add_term(3, 3, ExactRational(-3));
  s.add_term(3, 4, ExactRational(-6));
  s.add_term(3, 5, ExactRational(2));
  s.add_term(3, 6, ExactRational(1));
  s.add_term(4, 2, ExactRational(-2));
  s.add_term(4, 3, ExactRational(-5));
  s.add_term(4, 4, ExactRational(1));
  s.add_term(4, 5, ExactRational(2));
  s.add_term(4, 6, ExactRational(-1));
  s.add_term(4, 7, ExactRational(-3));
  s.add_term(5, 2, ExactRational(-2));
  s.add_term(5, 4, ExactRational(4));
  s.add_term(5, 6, ExactRational(-4));
  s.add_term(5, 8, ExactRational(2));
  s.add_term(6, 3, ExactRational(3));
  s.add_term(6, 4, ExactRational(1));
  s.add_term(6, 5, ExactRational(-2));
  s.add_term(6, 6, ExactRational(-1));
  s.add_term(6, 7, ExactRational(5));
  s.add_term(6, 8, ExactRational(2));
  s.add_term(7, 4, ExactRational(-1));
  s.add_term(7, 5, ExactRational(-2));
  s.add_term(7, 6, ExactRational(6));
  s.add_term(7, 7, ExactRational(3));
  s.add_term(7, 8, ExactRational(1));
  s.add_term(7, 9, ExactRational(-1));
  s.add_term(8, 5, ExactRational(2));
  s.add_term(8, 6, ExactRational(1));
  s.add_term(8, 8, ExactRational(-4));
  s.add_term(9, 7, ExactRational(-3));
  s.add_term(10, 10, ExactRational(-1));
  return s;
}

Poly numerator_star4() {
  Poly s = Poly::one();
  s.add_term(1, 1, ExactRational(1));
  s.add_term(1, 2, ExactRational(2));
  s.add_term(1, 3, ExactRational(3));
  s.add_term(2, 1, ExactRational(1));
  s.add_term(2, 2, ExactRational(2));
  s.add_term(2, 4, ExactRational(1));
  s.add_term(3, 2, ExactRational(-3));
  s.add_term(3, 3, ExactRational(-4));
  s.add_term(3, 4, ExactRational(-4));
  s.add_term(4, 5, ExactRational(-4));
  s.add_term(4, 6, ExactRational(-4));
  s.add_term(4, 7, ExactRational(-3));
  s.add_term(5, 5, ExactRational(1));
  s.add_term(5, 7, ExactRational(2));
  s.add_term(5, 8, ExactRational(1));
  s.add_term(6, 6, ExactRational(3));
  s.add_term(6, 7, ExactRational(2));
  s.add_term(6, 8, ExactRational(1));
  s.add_term(7, 9, ExactRational(1));
  return s;
}

Poly numerator_31_4() {
  Poly s = Poly::one();
  s.add_term(1, 2, ExactRational(1));
  s.add_term(1, 3, ExactRational(3));
  s.add_term(2, 1, ExactRational(1));
  s.add_term(2, 2, ExactRational(3));
  s.add_term(2, 4, ExactRational(-1));
  s.add_term(2, 5, ExactRational(-1));
  s.add_term(3, 2, ExactRational(-2));
  s.add_term(3, 3, ExactRational(-4));
  s.add_term(3, 4, ExactRational(-4));
  s.add_term(3, 5, ExactRational(1));
  s.add_term(3, 6, ExactRational(1));
  s.add_term(4, 2, ExactRational(-1));
  s.add_term(4, 3, ExactRational(-3));
  s.add_term(4, 4, ExactRational(-1));
  s.add_term(4, 6, ExactRational(-3));
  s.add_term(4, 7, ExactRational(-3));
  s.add_term(5, 2, ExactRational(-2));
  s.add_term(5, 3, ExactRational(-1));
  s.add_term(5, 4, ExactRational(2));
  s.add_term(5, 6, ExactRational(-2));
  s.add_term(5, 7, ExactRational(1));
  s.add_term(5, 8, ExactRational(2));
  s.add_term(6, 3, ExactRational(3));
  s.add_term(6, 4, ExactRational(3));
  s.add_term(6, 6, ExactRational(1));
  s.add_term(6, 7, ExactRational(3));
  s.add_term(6, 8, ExactRational(1));
  s.add_term(7, 4, ExactRational(-1));
  s.add_term(7, 5, ExactRational(-1));
  s.add_term(7, 6, ExactRational(4));
  s.add_term(7, 7, ExactRational(4));
  s.add_term(7, 8, ExactRational(2));
  s.add_term(8, 5, ExactRational(1));
  s.add_term(8, 6, ExactRational(1));
  s.add_term(8, 8, ExactRational(-3));
  s.add_term(8, 9, ExactRational(-1));
  s.add_term(9, 7, ExactRational(-3));
  s.add_term(9, 8, ExactRational(-1));
  s.add_term(10, 10, ExactRational(-1));
  return s;
}

RF four_segment_rf(Swapping swapping) {
  Poly den = omq(4) * omqt(2, 1) * omqt(3, 1) * omqt(1, 2) * omqt(2, 2);
  Poly num;
  switch (swapping) {
    case Swapping::Doubling:
      num = numerator_dbl4();
      break;
    case Swapping::Iterative:
      num = numerator_itr4();
      den *= omqt(1, 1) * omqt(1, 3);
      break;
    case Swapping::Optimal:
      num = numerator_star4();
      den *= omqt(1, 1);
      break;
    case Swapping::Mixed31:
      num = numerator_31_4();
      den *= omqt(1, 1) * omqt(1, 3);
      break;
    default:
      throw std::invalid_argument("catalog: no closed form for this four-segment swapping");
  }
  return rf(psym(4) * num, std::move(den));
}

// Optimal three-segment dephasing (parallel distribution, swap as soon as
// possible): p^3/(1-q^3) (1+(q+2q^2)t-(2q^2+q^3)t^3-q^4 t^4)/((1-qt)(1-q^2 t)(1-q t^2)).
RF star3_rf() {
  Poly num = Poly::one();
  num.add_term(1, 1, ExactRational(1));
  num.add_term(1, 2, ExactRational(2));
  num.add_term(3, 2, ExactRational(-2));
  num.add_term(3, 3, ExactRational(-1));
  num.add_term(4, 4, ExactRational(-1));
  return rf(psym(3) * num, omq(3) * omqt(1, 1) * omqt(2, 1) * omqt(1, 2));
}

RF three_segment_rf(ThreeSegmentLayout layout, Measurement meas) {
  const bool imm = meas == Measurement::Immediate;
  switch (layout) {
    case ThreeSegmentLayout::seq_a: {
      RF r = geo_rf();
      r *= geo_rf();
      return imm ? r : r.subst_t_sq();
    }
    case ThreeSegmentLayout::seq_b: {
      RF r = geo_rf(1);
      r *= geo_rf(2);  // one partner stored twice as long
      return imm ? r : r.subst_t_sq();
    }
    case ThreeSegmentLayout::seq_c:
      // Same distribution as seq_b when measuring immediately, and as seq_a
      // when not: the middle-start ordering relabels the i.i.d. attempts.
      return imm ? three_segment_rf(ThreeSegmentLayout::seq_b, meas)
                 : three_segment_rf(ThreeSegmentLayout::seq_a, meas);
    case ThreeSegmentLayout::start_a: {
      if (imm) {
        // p^3 t (1 - q^2 t^3) / ((1-q^2)(1-q t)^2 (1-q t^2))
        Poly num = psym(3) * (qt(0, 1) - qt(2, 4));
        return rf(std::move(num), omq(2) * omqt(1, 1).pow(2) * omqt(1, 2));
      }
      RF r = gtilde2_rf().subst_t_sq();
      r *= geo_rf(2);
      return r;
    }
    case ThreeSegmentLayout::start_b: {
      RF r = gtilde2_rf();
      r *= geo_rf(2);
      return imm ? r : r.subst_t_sq();
    }
    case ThreeSegmentLayout::end_a: {
      if (imm) {
        RF r = geo_rf();
        r *= geo_rf();
        return r;
      }
      return g2_par_rf().subst_t_sq();
    }
    case ThreeSegmentLayout::end_b: {
      // p^2 t (1 - q^2 t^3) / ((1-q t)(1-q^2 t)(1-q t^2))
      Poly num = psym(2) * (qt(0, 1) - qt(2, 4));
      RF r = rf(std::move(num), omqt(1, 1) * omqt(2, 1) * omqt(1, 2));
      return imm ? r : r.subst_t_sq();
    }
    case ThreeSegmentLayout::over_a: {
      if (imm) {
        // p^3 t (1 + q - 2q^2 t - q t^2 + q^4 t^4) / ((1-q^2)(1-qt)^2 (1-q^2 t)(1-q t^2))
        Poly inner = Poly::one();
        inner.add_term(0, 1, ExactRational(1));
        inner.add_term(1, 2, ExactRational(-2));
        inner.add_term(2, 1, ExactRational(-1));
        inner.add_term(4, 4, ExactRational(1));
        Poly num = psym(3) * qt(0, 1) * inner;
        return rf(std::move(num), omq(2) * omqt(1, 1).pow(2) * omqt(2, 1) * omqt(1, 2));
      }
      // p^3 t^2 (1 + 2q - q(1+q) t^4 - q^3 t^6) / ((1-q^2)(1-q t^2)(1-q^2 t^2)(1-q t^4))
      Poly inner = Poly::one();
      inner.add_term(0, 1, ExactRational(2));
      inner.add_term(4, 1, ExactRational(-1));
      inner.add_term(4, 2, ExactRational(-1));
      inner.add_term(6, 3, ExactRational(-1));
      Poly num = psym(3) * qt(0, 2) * inner;
      return rf(std::move(num), omq(2) * omqt(1, 2) * omqt(2, 2) * omqt(1, 4));
    }
    case ThreeSegmentLayout::over_b: {
      // p^3 t (t + q(2 - t^2 (1 + q + q^2 t))) / ((1-q^2)(1-q t)(1-q^2 t)(1-q t^2))
      Poly inner = qt(0, 1);
      inner.add_term(0, 1, ExactRational(2));
      inner.add_term(2, 1, ExactRational(-1));
      inner.add_term(2, 2, ExactRational(-1));
      inner.add_term(3, 3, ExactRational(-1));
      Poly num = psym(3) * qt(0, 1) * inner;
      RF r = rf(std::move(num), omq(2) * omqt(1, 1) * omqt(2, 1) * omqt(1, 2));
      return imm ? r : r.subst_t_sq();
    }
    case ThreeSegmentLayout::parallel_optimal: {
      if (imm) {
        // p^3/(1-q^3) (1 + q^2 t - 2q^3 t^2 - 2q^2 t^3 + q^3 t^4 + q^5 t^5) / ((1-qt)^2 (1-q^2 t)(1-q t^2))
        Poly num = Poly::one();
        num.add_term(1, 2, ExactRational(1));
        num.add_term(2, 3, ExactRational(-2));
        num.add_term(3, 2, ExactRational(-2));
        num.add_term(4, 3, ExactRational(1));
        num.add_term(5, 5, ExactRational(1));
        return rf(psym(3) * num, omq(3) * omqt(1, 1).pow(2) * omqt(2, 1) * omqt(1, 2));
      }
      return star3_rf().subst_t_sq();
    }
  }
  throw std::invalid_argument("catalog: unknown three-segment layout");
}

RF fixture_rf(const SchemeSpec& scheme) {
  scheme.validate();
  switch (scheme.distribution) {
    case Distribution::FullySequential: {
      switch (scheme.cutoff.kind) {
        case Cutoff::Kind::None: {
          RF r;
          for (int j = 1; j < scheme.n; ++j) r *= geo_rf();
          return r;
        }
        case Cutoff::Kind::Global:
          if (scheme.cutoff.m < scheme.n - 1) {
            throw std::invalid_argument("catalog: cutoff below n-1 makes success impossible");
          }
          if (scheme.n == 1) return RF{};
          return sequential_global_cutoff_rf(scheme.n, scheme.cutoff.m).second;
        case Cutoff::Kind::Vector:
          return sequential_vector_cutoff_rf(scheme.n, scheme.cutoff.vec).second;
      }
      break;
    }
    case Distribution::Parallel: {
      if (scheme.cutoff.kind == Cutoff::Kind::Global) {
        if (scheme.n == 2) return parallel_two_segment_cutoff_rf(scheme.cutoff.m).second;
        throw std::invalid_argument("catalog: parallel cutoff forms exist only for n=2");
      }
      if (scheme.cutoff.kind == Cutoff::Kind::Vector) break;
      if (scheme.n == 1) return RF{};
      if (scheme.n == 2) return gtilde2_rf();
      if (scheme.n == 3 && scheme.swapping == Swapping::Optimal) return star3_rf();
      if (scheme.n == 4) return four_segment_rf(scheme.swapping);
      throw std::invalid_argument("catalog: no closed form for this parallel scheme; use the permutation engine");
    }
    case Distribution::ThreeSegmentVariant:
      return three_segment_rf(*scheme.layout, scheme.measurement);
  }
  throw std::invalid_argument("catalog: no closed form for this scheme");
}

}  // namespace

SymbolicPGF geometric_pgf(const ExactRational& p) {
  return geo_rf().make(check_p(p));
}

std::pair<SymbolicPGF, SymbolicPGF> sequential_pgfs(int n, const ExactRational& p) {
  if (n < 1) throw std::invalid_argument("sequential_pgfs: n must be >= 1");
  const ExactRational q = check_p(p);
  RF k, d;
  for (int j = 0; j < n; ++j) k *= geo_rf();
  for (int j = 1; j < n; ++j) d *= geo_rf();
  return {k.make(q), d.make(q)};
}

std::pair<SymbolicPGF, SymbolicPGF> sequential_global_cutoff_pgfs(int n, const ExactRational& p,
                                                                  std::int64_t m) {
  const ExactRational q = check_p(p);
  if (n < 1) throw std::invalid_argument("sequential_global_cutoff_pgfs: n must be >= 1");
  if (m < n - 1) {
    throw std::invalid_argument("sequential_global_cutoff_pgfs: cutoff below n-1 makes success impossible");
  }
  if (n == 1) return {geo_rf().make(q), RF{}.make(q)};
  auto [k, d] = sequential_global_cutoff_rf(n, m);
  return {k.make(q), d.make(q)};
}

std::pair<double, double> sequential_global_cutoff_values(int n, double p, double t, double m) {
  if (n < 1) throw std::invalid_argument("sequential_global_cutoff_values: n must be >= 1");
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("sequential_global_cutoff_values: p must lie in (0, 1)");
  }
  if (!(t > 0.0) || t > 1.0) {
    throw std::invalid_argument("sequential_global_cutoff_values: t must lie in (0, 1]");
  }
  if (!(m >= n - 1)) {
    throw std::invalid_argument("sequential_global_cutoff_values: cutoff below n-1 makes success impossible");
  }
  const double q = 1.0 - p;
  if (n == 1) return {p * t / (1.0 - q * t), 1.0};

  const double lq = std::log1p(-p);
  const double lp = std::log(p);
  const double lt = std::log(t);
  // ln C(a, k) for huge a and small integer k.
  const auto lchoose = [](double a, int k) {
    double s = -std::lgamma(static_cast<double>(k) + 1.0);
    for (int i = 0; i < k; ++i) s += std::log(a - i);
    return s;
  };

  // S(x) = sum_{j=0}^{m-n+1} C(j+n-2, n-2) x^j at x = q t.
  const double x = q * t;
  const double lx = lq + lt;
  const double top = m - n + 1;  // last retained index
  double s = 0.0;
  if (top <= 3e6) {
    double term = 1.0;
    for (double j = 0.0; j <= top; j += 1.0) {
      s += term;
      term *= x * (j + n - 1) / (j + 1);
    }
  } else {
    // Full series minus its tail; the tail starts at j = top+1 and is summed
    // until it either converges or its ratio settles at the geometric limit.
    s = std::pow(1.0 - x, -(n - 1));
    double j = top + 1.0;
    double term = std::exp(lchoose(j + n - 2, n - 2) + j * lx);
    double tail = 0.0;
    for (long long it = 0; it < 2000000 && term > tail * 1e-18; ++it) {
      tail += term;
      term *= x * (j + n - 1) / (j + 1);
      j += 1.0;
    }
    if (term > tail * 1e-18) {
      const double r = x * (j + n - 1) / (j + 1);
      tail += term * r / (1.0 - r);
    }
    s -= tail;
  }

  // T = sum_{i=0}^{n-2} C(m, i) p^i q^(m-i), shared by both denominators.
  double big_t = 0.0;
  for (int i = 0; i <= n - 2; ++i) {
    big_t += std::exp(lchoose(m, i) + i * lp + (m - i) * lq);
  }

  const double k_den = 1.0 - q * t - p * std::exp((m + 1) * lt) * big_t;
  const double k_val = std::exp(n * (lp + lt)) * s / k_den;
  const double d_val = std::exp((n - 1) * (lp + lt)) * s / (1.0 - big_t);
  return {k_val, d_val};
}

std::pair<SymbolicPGF, SymbolicPGF> sequential_vector_cutoff_pgfs(int n, const ExactRational& p,
                                                                  const CutoffVector& m) {
  const ExactRational q = check_p(p);
  if (n < 1) throw std::invalid_argument("sequential_vector_cutoff_pgfs: n must be >= 1");
  if (m.m.size() != static_cast<std::size_t>(n - 1)) {
    throw std::invalid_argument("sequential_vector_cutoff_pgfs: cutoff vector must have n-1 entries");
  }
  for (auto v : m.m) {
    if (v < 1) throw std::invalid_argument("sequential_vector_cutoff_pgfs: cutoffs must be >= 1");
  }
  auto [k, d] = sequential_vector_cutoff_rf(n, m);
  return {k.make(q), d.make(q)};
}

SymbolicPGF parallel_K_pgf(int n, const ExactRational& p) {
  if (n < 1) throw std::invalid_argument("parallel_K_pgf: n must be >= 1");
  return parallel_K_rf(n).make(check_p(p));
}

ExactRational parallel_K_mean(int n, const ExactRational& p) {
  if (n < 1) throw std::invalid_argument("parallel_K_mean: n must be >= 1");
  const ExactRational q = check_p(p);
  ExactRational s(0);
  for (i64 i = 1; i <= n; ++i) {
    const ExactRational term = ExactRational(binom(n, i), BigInt(1)) /
                               (ExactRational(1) - q.pow(i));
    s += (i % 2 == 1) ? term : -term;
  }
  return s;
}

std::pair<SymbolicPGF, SymbolicPGF> parallel_two_segment_cutoff_pgfs(const ExactRational& p,
                                                                     std::int64_t m) {
  const ExactRational q = check_p(p);
  if (m < 1) throw std::invalid_argument("parallel_two_segment_cutoff_pgfs: m must be >= 1");
  auto [k, d] = parallel_two_segment_cutoff_rf(m);
  return {k.make(q), d.make(q)};
}

SymbolicPGF fixture_pgf(const SchemeSpec& scheme, const ExactRational& p) {
  return fixture_rf(scheme).make(check_p(p));
}

SymbolicPGF fixture_pgf_bivariate(const SchemeSpec& scheme) {
  return fixture_rf(scheme).make(std::nullopt);
}

ExactRational waiting_time_mean(const SchemeSpec& scheme, const ExactRational& p) {
  scheme.validate();
  const ExactRational q = check_p(p);
  const ExactRational one(1), two(2);
  switch (scheme.distribution) {
    case Distribution::FullySequential:
      if (scheme.cutoff.kind == Cutoff::Kind::None) return ExactRational(scheme.n) / p;
      break;
    case Distribution::Parallel:
      if (scheme.cutoff.kind == Cutoff::Kind::None) return parallel_K_mean(scheme.n, p);
      break;
    case Distribution::ThreeSegmentVariant:
      switch (*scheme.layout) {
        case ThreeSegmentLayout::seq_a:
        case ThreeSegmentLayout::seq_b:
        case ThreeSegmentLayout::seq_c:
          return ExactRational(3) / p;
        case ThreeSegmentLayout::start_a:
        case ThreeSegmentLayout::start_b:
        case ThreeSegmentLayout::end_a:
        case ThreeSegmentLayout::end_b:
          return (ExactRational(5) - ExactRational(3) * p) / ((two - p) * p);
        case ThreeSegmentLayout::over_a:
        case ThreeSegmentLayout::over_b:
          return (ExactRational(8) - ExactRational(3) * p * (ExactRational(3) - p)) /
                 (p * (two - p) * (two - p));
        case ThreeSegmentLayout::parallel_optimal:
          return (one + q * (ExactRational(4) + ExactRational(3) * q * (one + q))) /
                 (one + q - q.pow(3) - q.pow(4));
      }
      break;
  }
  throw std::invalid_argument("waiting_time_mean: no closed form for this scheme");
}

}  // namespace rpgf

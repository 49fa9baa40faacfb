// Tests for the closed-form scheme catalog: geometric building blocks,
// sequential schemes with and without cutoffs, and parallel waiting times.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "repeaterpgf/catalog.hpp"
#include "repeaterpgf/pgf.hpp"
#include "repeaterpgf/scheme.hpp"

using rpgf::Cutoff;
using rpgf::CutoffVector;
using rpgf::Distribution;
using rpgf::ExactRational;
using rpgf::Measurement;
using rpgf::SchemeSpec;
using rpgf::Swapping;
using rpgf::SymbolicPGF;
using rpgf::ThreeSegmentLayout;

namespace {

ExactRational rat(long long n, long long d) { return ExactRational(n, d); }

SchemeSpec three_segment(ThreeSegmentLayout layout, Measurement meas) {
  SchemeSpec s;
  s.n = 3;
  s.distribution = Distribution::ThreeSegmentVariant;
  s.layout = layout;
  s.swapping = Swapping::Optimal;
  s.measurement = meas;
  return s;
}

}  // namespace

TEST_CASE("geometric pgf basics") {
  SymbolicPGF unit = rpgf::geometric_pgf(ExactRational(1));
  CHECK(unit.serialize() == "num_coeffs=[(1,1)];den_coeffs=[(0,1)]");

  SymbolicPGF g = rpgf::geometric_pgf(rat(1, 2));
  CHECK(g.series(3)[3] == rat(1, 8));
  CHECK(rpgf::geometric_pgf(rat(1, 4)).mean_exact() == ExactRational(4));
  CHECK_THROWS_AS(rpgf::geometric_pgf(ExactRational(0)), std::domain_error);
  CHECK_THROWS_AS(rpgf::geometric_pgf(rat(3, 2)), std::domain_error);
}

TEST_CASE("sequential scheme pgfs") {
  auto [k1, d1] = rpgf::sequential_pgfs(1, rat(1, 3));
  CHECK(SymbolicPGF::symbolic_equal(k1, rpgf::geometric_pgf(rat(1, 3))));
  CHECK(d1.eval_exact(rat(1, 7)) == ExactRational(1));  // D identically zero

  const ExactRational p = rat(1, 2);
  auto [k3, d3] = rpgf::sequential_pgfs(3, p);
  CHECK(k3.mean_exact() == ExactRational(6));
  CHECK(d3.mean_exact() == ExactRational(4));

  // Convolution oracle: P(K=k) for K = N1+N2+N3 by direct enumeration.
  auto series = k3.series(10);
  for (long long k = 0; k <= 10; ++k) {
    ExactRational acc(0);
    for (long long a = 1; a < k; ++a) {
      for (long long b = 1; a + b < k; ++b) {
        const long long c = k - a - b;
        acc += p.pow(3) * (ExactRational(1) - p).pow(a + b + c - 3);
      }
    }
    CHECK(series[static_cast<std::size_t>(k)] == acc);
  }
}

TEST_CASE("sequential global cutoff at n=2 matches an independent renewal recursion") {
  const ExactRational p = rat(1, 2), q = rat(1, 2);
  const std::int64_t m = 1;
  auto [kpgf, dpgf] = rpgf::sequential_global_cutoff_pgfs(2, p, m);

  // D is identically 1 when m=1.
  auto dser = dpgf.series(6);
  CHECK(dser[1] == ExactRational(1));
  CHECK(dser[0] + dser[2] + dser[3] + dser[4] == ExactRational(0));

  // Renewal recursion: a round is segment 1 (geometric) plus one storage
  // window of m steps; it succeeds if segment 2 finishes inside the window.
  // For m=1: s[j] = P(success round of length j), r[j] = P(failed round, j).
  const std::size_t kmax = 30;
  std::vector<ExactRational> s(kmax + 1, ExactRational(0)), r(kmax + 1, ExactRational(0)),
      f(kmax + 1, ExactRational(0));
  for (std::size_t j = 2; j <= kmax; ++j) {
    s[j] = q.pow(static_cast<long long>(j) - 2) * p * p;
    r[j] = q.pow(static_cast<long long>(j) - 2) * p * q;
  }
  for (std::size_t k = 0; k <= kmax; ++k) {
    f[k] = s[k];
    for (std::size_t j = 2; j + 2 <= k; ++j) f[k] += r[j] * f[k - j];
  }
  auto kser = kpgf.series(kmax);
  for (std::size_t k = 0; k <= kmax; ++k) CHECK(kser[k] == f[k]);
}

TEST_CASE("sequential global cutoff at n=3 matches an independent renewal recursion") {
  const ExactRational p = rat(2, 5), q = rat(3, 5);
  const std::int64_t m = 4;
  auto [kpgf, dpgf] = rpgf::sequential_global_cutoff_pgfs(3, p, m);

  // Failure round: segment 1 plus exactly m storage steps during which at
  // most one of the two remaining segments succeeded.
  // Success round: segment 1 plus d = N2+N3 <= m storage steps.
  const std::size_t kmax = 40;
  std::vector<ExactRational> f(kmax + 1, ExactRational(0));
  const ExactRational fail_tail = q.pow(m) + ExactRational(m) * p * q.pow(m - 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    ExactRational acc(0);
    for (long long a = 1; a + 2 <= static_cast<long long>(k); ++a) {
      const long long d = static_cast<long long>(k) - a;
      if (d > m) continue;
      acc += p * q.pow(a - 1) * p.pow(2) * q.pow(d - 2) * ExactRational(d - 1);
    }
    for (long long a = 1; a + m < static_cast<long long>(k); ++a) {
      const std::size_t rest = k - static_cast<std::size_t>(a + m);
      acc += p * q.pow(a - 1) * fail_tail * f[rest];
    }
    f[k] = acc;
  }
  auto kser = kpgf.series(kmax);
  for (std::size_t k = 0; k <= kmax; ++k) CHECK(kser[k] == f[k]);

  // D restricted to [n-1, m] with the truncated negative-binomial weights.
  auto dser = dpgf.series(10);
  ExactRational norm(0);
  for (long long d = 2; d <= m; ++d) norm += ExactRational(d - 1) * q.pow(d - 2);
  for (long long d = 0; d <= 10; ++d) {
    const ExactRational expect = (d >= 2 && d <= m)
                                     ? ExactRational(d - 1) * q.pow(d - 2) / norm
                                     : ExactRational(0);
    CHECK(dser[static_cast<std::size_t>(d)] == expect);
  }
}

TEST_CASE("sequential cutoff pgfs approach the non-truncated limit") {
  const ExactRational p = rat(3, 10);
  auto nocut = rpgf::sequential_pgfs(3, p);
  auto cut = rpgf::sequential_global_cutoff_pgfs(3, p, 100);
  CHECK(std::abs(cut.first.eval(0.99) - nocut.first.eval(0.99)) < 1e-6);
  CHECK(std::abs(cut.second.eval(0.99) - nocut.second.eval(0.99)) < 1e-6);
  CHECK(cut.first.eval_exact(ExactRational(1)) == ExactRational(1));
  CHECK(cut.second.eval_exact(ExactRational(1)) == ExactRational(1));
}

TEST_CASE("cutoff monotonicity in m") {
  const ExactRational p = rat(2, 5);
  ExactRational prev_k(0), prev_d(0);
  const ExactRational unlimited_k = ExactRational(3) / p;
  for (std::int64_t m = 2; m <= 12; ++m) {
    auto [kpgf, dpgf] = rpgf::sequential_global_cutoff_pgfs(3, p, m);
    const ExactRational mk = kpgf.mean_exact(), md = dpgf.mean_exact();
    if (m > 2) {
      CHECK(mk <= prev_k);
      CHECK(md >= prev_d);
    }
    CHECK(mk >= unlimited_k);
    prev_k = mk;
    prev_d = md;
  }
}

TEST_CASE("vector cutoff consistency") {
  const ExactRational p = rat(2, 5);
  SUBCASE("n=2 vector equals global") {
    for (std::int64_t m : {1, 2, 5}) {
      auto vec = rpgf::sequential_vector_cutoff_pgfs(2, p, CutoffVector{{m}});
      auto glob = rpgf::sequential_global_cutoff_pgfs(2, p, m);
      CHECK(SymbolicPGF::symbolic_equal(vec.first, glob.first));
      CHECK(SymbolicPGF::symbolic_equal(vec.second, glob.second));
    }
  }
  SUBCASE("large cutoffs converge to the plain sequential scheme") {
    auto vec = rpgf::sequential_vector_cutoff_pgfs(3, p, CutoffVector{{60, 60}});
    auto plain = rpgf::sequential_pgfs(3, p);
    CHECK(std::abs(vec.first.eval(0.99) - plain.first.eval(0.99)) < 1e-6);
    CHECK(std::abs(vec.second.eval(0.99) - plain.second.eval(0.99)) < 1e-6);
  }
  SUBCASE("normalization") {
    auto vec = rpgf::sequential_vector_cutoff_pgfs(3, p, CutoffVector{{2, 4}});
    CHECK(vec.first.eval_exact(ExactRational(1)) == ExactRational(1));
    CHECK(vec.second.eval_exact(ExactRational(1)) == ExactRational(1));
  }
}

TEST_CASE("vector cutoff pgfs match a direct protocol simulation") {
  const double p = 0.3;
  const std::vector<std::int64_t> cutoffs = {2, 4};
  auto [kpgf, dpgf] = rpgf::sequential_vector_cutoff_pgfs(3, rat(3, 10), CutoffVector{{2, 4}});

  std::mt19937_64 rng(911823344u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double lq = std::log1p(-p);
  auto draw = [&]() { return static_cast<std::int64_t>(std::ceil(std::log(1.0 - unif(rng)) / lq)); };

  const std::size_t samples = 1000000;
  double ksum = 0.0, ksq = 0.0, dsum = 0.0, dsq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    std::int64_t k = 0, d = 0;
    for (std::size_t j = 0; j <= cutoffs.size();) {
      const std::int64_t n = draw();
      if (j == 0) {
        k += n;
        ++j;
        continue;
      }
      if (n > cutoffs[j - 1]) {  // discard the whole chain and start over
        k += cutoffs[j - 1];
        d = 0;
        j = 0;
        continue;
      }
      k += n;
      d += n;
      ++j;
    }
    ksum += static_cast<double>(k);
    ksq += static_cast<double>(k) * static_cast<double>(k);
    dsum += static_cast<double>(d);
    dsq += static_cast<double>(d) * static_cast<double>(d);
  }
  const double nn = static_cast<double>(samples);
  const double kmean = ksum / nn, kvar = ksq / nn - kmean * kmean;
  const double dmean = dsum / nn, dvar = dsq / nn - dmean * dmean;
  CHECK(std::abs(kmean - kpgf.mean()) < 3.0 * std::sqrt(kvar / nn));
  CHECK(std::abs(dmean - dpgf.mean()) < 3.0 * std::sqrt(dvar / nn));
}

TEST_CASE("parallel waiting time pgf") {
  CHECK(SymbolicPGF::symbolic_equal(rpgf::parallel_K_pgf(1, rat(1, 3)),
                                    rpgf::geometric_pgf(rat(1, 3))));

  const ExactRational p = rat(1, 2), q = rat(1, 2);
  SymbolicPGF g3 = rpgf::parallel_K_pgf(3, p);
  const ExactRational m3 = (ExactRational(1) +
                            q * (ExactRational(4) + ExactRational(3) * q * (ExactRational(1) + q))) /
                           (ExactRational(1) + q - q.pow(3) - q.pow(4));
  CHECK(g3.mean_exact() == m3);
  CHECK(rpgf::parallel_K_mean(3, p) == m3);
  CHECK(m3 == rat(22, 7));

  // Brute-force oracle: E[max(N1,N2,N3)] by triple enumeration.
  double brute = 0.0;
  const double pd = 0.5;
  for (int a = 1; a <= 64; ++a) {
    for (int b = 1; b <= 64; ++b) {
      for (int c = 1; c <= 64; ++c) {
        brute += std::max({a, b, c}) * std::pow(1 - pd, a + b + c - 3) * pd * pd * pd;
      }
    }
  }
  CHECK(g3.mean() == doctest::Approx(brute).epsilon(1e-10));

  for (int n = 2; n <= 8; ++n) {
    SymbolicPGF g = rpgf::parallel_K_pgf(n, rat(1, 10));
    CHECK(g.eval_exact(ExactRational(1)) == ExactRational(1));
    CHECK(g.mean_exact() == rpgf::parallel_K_mean(n, rat(1, 10)));
  }
}

TEST_CASE("two-segment parallel cutoff pgfs") {
  const ExactRational p = rat(1, 2), q = rat(1, 2);
  SUBCASE("waiting time matches a renewal recursion") {
    const std::int64_t m = 1;
    auto [kpgf, dpgf] = rpgf::parallel_two_segment_cutoff_pgfs(p, m);
    auto kser = kpgf.series(25);
    CHECK(kser[1] == rat(1, 4));
    CHECK(kser[2] == rat(5, 16));

    // s[j]: both finish with |N1-N2| <= m and max = j. r[j]: first finisher
    // waits m steps in vain; the restart consumes min + m = j steps.
    const std::size_t kmax = 25;
    std::vector<ExactRational> s(kmax + 1, ExactRational(0)), r(kmax + 1, ExactRational(0)),
        f(kmax + 1, ExactRational(0));
    for (long long j = 1; j <= static_cast<long long>(kmax); ++j) {
      ExactRational sj = p.pow(2) * q.pow(2 * j - 2);
      for (long long v = std::max<long long>(1, j - m); v < j; ++v) {
        sj += ExactRational(2) * p * q.pow(j - 1) * p * q.pow(v - 1);
      }
      s[static_cast<std::size_t>(j)] = sj;
      const long long v = j - m;
      if (v >= 1) {
        r[static_cast<std::size_t>(j)] =
            ExactRational(2) * p * q.pow(v - 1) * q.pow(v + m);
      }
    }
    for (std::size_t k = 0; k <= kmax; ++k) {
      f[k] = s[k];
      for (std::size_t j = 1; j < k; ++j) f[k] += r[j] * f[k - j];
    }
    for (std::size_t k = 0; k <= kmax; ++k) CHECK(kser[k] == f[k]);
  }
  SUBCASE("dephasing is the truncated difference distribution") {
    const std::int64_t m = 3;
    auto [kpgf, dpgf] = rpgf::parallel_two_segment_cutoff_pgfs(p, m);
    ExactRational norm = p / (ExactRational(1) + q);
    std::vector<ExactRational> expect(m + 1, ExactRational(0));
    expect[0] = p / (ExactRational(1) + q);
    for (long long d = 1; d <= m; ++d) {
      expect[static_cast<std::size_t>(d)] =
          ExactRational(2) * p * q.pow(d) / (ExactRational(1) + q);
      norm += expect[static_cast<std::size_t>(d)];
    }
    auto dser = dpgf.series(8);
    for (long long d = 0; d <= 8; ++d) {
      const ExactRational e =
          d <= m ? expect[static_cast<std::size_t>(d)] / norm : ExactRational(0);
      CHECK(dser[static_cast<std::size_t>(d)] == e);
    }
  }
  SUBCASE("limit consistency") {
    auto cut = rpgf::parallel_two_segment_cutoff_pgfs(rat(3, 10), 200);
    SchemeSpec par2;
    par2.n = 2;
    par2.swapping = Swapping::None;
    CHECK(std::abs(cut.first.eval(0.99) - rpgf::parallel_K_pgf(2, rat(3, 10)).eval(0.99)) < 1e-6);
    CHECK(std::abs(cut.second.eval(0.99) - rpgf::fixture_pgf(par2, rat(3, 10)).eval(0.99)) < 1e-6);
  }
}

TEST_CASE("catalog equivalences") {
  const ExactRational p = rat(2, 7);
  SUBCASE("two-segment dephasing mean") {
    SchemeSpec par2;
    par2.n = 2;
    par2.swapping = Swapping::None;
    // E|N1-N2| = 2q/(1-q^2) by direct summation.
    const ExactRational q = ExactRational(1) - p;
    CHECK(rpgf::fixture_pgf(par2, p).mean_exact() ==
          ExactRational(2) * q / (ExactRational(1) - q * q));
  }
  SUBCASE("seq_c aliases") {
    auto imm_b = rpgf::fixture_pgf(three_segment(ThreeSegmentLayout::seq_b, Measurement::Immediate), p);
    auto imm_c = rpgf::fixture_pgf(three_segment(ThreeSegmentLayout::seq_c, Measurement::Immediate), p);
    CHECK(SymbolicPGF::symbolic_equal(imm_b, imm_c));
    auto non_a = rpgf::fixture_pgf(three_segment(ThreeSegmentLayout::seq_a, Measurement::NonImmediate), p);
    auto non_c = rpgf::fixture_pgf(three_segment(ThreeSegmentLayout::seq_c, Measurement::NonImmediate), p);
    CHECK(SymbolicPGF::symbolic_equal(non_a, non_c));
  }
  SUBCASE("sequential fixture equals the power form") {
    SchemeSpec seq4;
    seq4.n = 4;
    seq4.distribution = Distribution::FullySequential;
    CHECK(SymbolicPGF::symbolic_equal(rpgf::fixture_pgf(seq4, p),
                                      rpgf::sequential_pgfs(4, p).second));
  }
  SUBCASE("optimal three-segment non-immediate doubles the raw variable") {
    SchemeSpec raw3;
    raw3.n = 3;
    auto raw = rpgf::fixture_pgf(raw3, p);
    auto non = rpgf::fixture_pgf(three_segment(ThreeSegmentLayout::parallel_optimal,
                                               Measurement::NonImmediate), p);
    CHECK(non.mean_exact() == ExactRational(2) * raw.mean_exact());
    CHECK(std::abs(non.eval(0.7) - raw.eval(0.49)) < 1e-14);
  }
}

TEST_CASE("fixtures normalize to one at t=1") {
  const std::vector<ExactRational> ps = {rat(9, 10), rat(1, 2), rat(1, 10), rat(1, 100)};
  std::vector<SchemeSpec> specs;
  for (auto layout : {ThreeSegmentLayout::seq_a, ThreeSegmentLayout::seq_b, ThreeSegmentLayout::seq_c,
                      ThreeSegmentLayout::start_a, ThreeSegmentLayout::start_b,
                      ThreeSegmentLayout::end_a, ThreeSegmentLayout::end_b,
                      ThreeSegmentLayout::over_a, ThreeSegmentLayout::over_b,
                      ThreeSegmentLayout::parallel_optimal}) {
    specs.push_back(three_segment(layout, Measurement::Immediate));
    specs.push_back(three_segment(layout, Measurement::NonImmediate));
  }
  for (auto swap : {Swapping::Optimal, Swapping::Doubling, Swapping::Iterative, Swapping::Mixed31}) {
    SchemeSpec s;
    s.n = 4;
    s.swapping = swap;
    specs.push_back(s);
  }
  {
    SchemeSpec s;
    s.n = 3;
    specs.push_back(s);
    s.n = 2;
    s.swapping = Swapping::None;
    specs.push_back(s);
    SchemeSpec c = s;
    c.cutoff = Cutoff::global(4);
    specs.push_back(c);
  }
  for (const auto& spec : specs) {
    for (const auto& p : ps) {
      CHECK(rpgf::fixture_pgf(spec, p).eval_exact(ExactRational(1)) == ExactRational(1));
    }
  }
}

TEST_CASE("fixture rejects schemes without closed forms") {
  SchemeSpec opt8;
  opt8.n = 8;
  CHECK_THROWS_AS(rpgf::fixture_pgf(opt8, rat(1, 2)), std::invalid_argument);
  SchemeSpec bad;
  bad.n = 3;
  bad.distribution = Distribution::ThreeSegmentVariant;  // no layout given
  CHECK_THROWS_AS(rpgf::fixture_pgf(bad, rat(1, 2)), std::invalid_argument);
}

TEST_CASE("waiting time means") {
  const ExactRational p = rat(2, 5);
  const double pd = 0.4, qd = 0.6;
  CHECK(rpgf::waiting_time_mean(three_segment(ThreeSegmentLayout::seq_a, Measurement::Immediate), p) ==
        ExactRational(3) / p);
  CHECK(rpgf::waiting_time_mean(three_segment(ThreeSegmentLayout::start_b, Measurement::Immediate), p) ==
        (ExactRational(5) - ExactRational(3) * p) / ((ExactRational(2) - p) * p));

  // Brute-force oracles by triple enumeration.
  double simult = 0.0, over = 0.0;
  for (int a = 1; a <= 70; ++a) {
    for (int b = 1; b <= 70; ++b) {
      for (int c = 1; c <= 70; ++c) {
        const double w = std::pow(qd, a + b + c - 3) * pd * pd * pd;
        simult += w * (std::max(a, b) + c);
        over += w * (std::min(a, b) + std::max(std::abs(a - b), c));
      }
    }
  }
  CHECK(rpgf::waiting_time_mean(three_segment(ThreeSegmentLayout::end_a, Measurement::Immediate), p)
            .to_double() == doctest::Approx(simult).epsilon(1e-9));
  CHECK(rpgf::waiting_time_mean(three_segment(ThreeSegmentLayout::over_b, Measurement::Immediate), p)
            .to_double() == doctest::Approx(over).epsilon(1e-9));

  SchemeSpec par4;
  par4.n = 4;
  CHECK(rpgf::waiting_time_mean(par4, p) == rpgf::parallel_K_mean(4, p));
  SchemeSpec seq5;
  seq5.n = 5;
  seq5.distribution = Distribution::FullySequential;
  CHECK(rpgf::waiting_time_mean(seq5, p) == ExactRational(5) / p);
}

TEST_CASE("scheme validation") {
  SchemeSpec s;
  s.n = 8;
  s.swapping = Swapping::Mixed31;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.n = 4;
  CHECK_NOTHROW(s.validate());
  s.cutoff = Cutoff::vector({1, 2, 3});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // vector cutoff needs sequential
  s.distribution = Distribution::FullySequential;
  s.swapping = Swapping::Optimal;
  CHECK_NOTHROW(s.validate());
  s.cutoff = Cutoff::vector({1, 2});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);  // wrong arity
  CHECK_THROWS_AS(Cutoff::vector({0, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Cutoff::global(0), std::invalid_argument);
  SchemeSpec t;
  t.n = 2;
  t.distribution = Distribution::ThreeSegmentVariant;
  t.layout = ThreeSegmentLayout::seq_a;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

// Tests for the density-operator layer: channel algebra, the Bell-diagonal
// family closure, the full-matrix swap against its parametric form, and the
// induction from repeated swapping to the final-state expression.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "repeaterpgf/perm_engine.hpp"
#include "repeaterpgf/quantum_state.hpp"

namespace {

using rpgf::BellDiagonalState;
using rpgf::DensityMatrix;
using rpgf::DephasingPolicy;
using rpgf::FinalStateParams;

DensityMatrix random_density(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // G G^dagger is positive semidefinite; normalize to unit trace.
  std::vector<std::complex<double>> g(dim * dim);
  for (auto& z : g) z = {u(rng), u(rng)};
  DensityMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::complex<double> s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += g[i * dim + k] * std::conj(g[j * dim + k]);
      m.at(i, j) = s;
    }
  }
  const double tr = m.trace().real();
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) m.at(i, j) /= tr;
  }
  return m;
}

BellDiagonalState random_family(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(rng), u(rng)};
}

void check_physical(const DensityMatrix& m) {
  CHECK(m.is_hermitian(1e-12));
  CHECK(m.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(m.trace().imag()) < 1e-12);
  CHECK(m.min_eigenvalue() >= -1e-10);
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Runs a swap schedule over blocks with given readiness times: each merge
// waits for both sides, dephases the adjacent memories accordingly, swaps,
// and records the waited steps.  Returns the final matrix and the total.
struct MergeResult {
  DensityMatrix rho;
  std::int64_t ready = 0;
  std::int64_t dephasing = 0;
};

struct Block {
  DensityMatrix rho;
  std::int64_t ready = 0;
};

MergeResult merge_pair(const Block& left, const Block& right, double alpha, double mu,
                       std::int64_t accumulated) {
  const std::int64_t s = std::max(left.ready, right.ready);
  const DensityMatrix l =
      rpgf::dephase(left.rho, alpha * static_cast<double>(s - left.ready), 1);
  const DensityMatrix r =
      rpgf::dephase(right.rho, alpha * static_cast<double>(s - right.ready), 0);
  return {rpgf::swap_full(l, r, mu), s,
          accumulated + (s - left.ready) + (s - right.ready)};
}

}  // namespace

TEST_CASE("unit-strength channels are identities") {
  std::mt19937_64 rng(101);
  const DensityMatrix rho = random_density(rng, 4);
  CHECK(approx_equal(rpgf::dephase(rho, 0.0, 0), rho, 1e-15));
  CHECK(approx_equal(rpgf::dephase_lambda(rho, 0.0, 1), rho, 1e-15));
  CHECK(approx_equal(rpgf::depolarize2(rho, 1.0), rho, 1e-15));

  const DensityMatrix mixed = rpgf::depolarize2(rho, 0.0);
  DensityMatrix quarter(4);
  for (std::size_t i = 0; i < 4; ++i) quarter.at(i, i) = 0.25;
  CHECK(approx_equal(mixed, quarter, 1e-15));

  const BellDiagonalState s{0.8, 0.9};
  CHECK(rpgf::dephase(s, 0.0).F == doctest::Approx(0.8));
  CHECK(rpgf::depolarize2(s, 1.0).mu == doctest::Approx(0.9));
}

TEST_CASE("channel parameters are validated") {
  const DensityMatrix rho = DensityMatrix::identity(4);
  CHECK_THROWS_AS(rpgf::dephase(rho, -0.1, 0), std::domain_error);
  CHECK_THROWS_AS(rpgf::dephase_lambda(rho, 0.5, 0), std::domain_error);
  CHECK_THROWS_AS(rpgf::dephase_lambda(rho, -0.01, 0), std::domain_error);
  CHECK_THROWS_AS(rpgf::dephase(rho, 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(rpgf::depolarize2(rho, 1.2), std::domain_error);
  CHECK_THROWS_AS(rpgf::depolarize2(DensityMatrix::identity(16), 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(rpgf::realize({1.5, 1.0}), std::domain_error);
  CHECK_THROWS_AS(rpgf::final_state({0, 1.0, 1.0, 1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(DensityMatrix(6), std::invalid_argument);
}

TEST_CASE("dephasing is a semigroup and the lambda form matches") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density(rng, 4);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    const double a = u(rng), b = u(rng);
    for (int qubit = 0; qubit < 2; ++qubit) {
      const DensityMatrix two_steps = rpgf::dephase(rpgf::dephase(rho, a, qubit), b, qubit);
      CHECK(approx_equal(two_steps, rpgf::dephase(rho, a + b, qubit), 1e-12));
      const double lambda = (1.0 - std::exp(-a)) / 2.0;
      CHECK(approx_equal(rpgf::dephase_lambda(rho, lambda, qubit),
                         rpgf::dephase(rho, a, qubit), 1e-14));
    }
    // Depolarizations compose by multiplying the survival parameters.
    const double m1 = 0.5 + u(rng) / 4.0, m2 = 0.5 + u(rng) / 4.0;
    CHECK(approx_equal(rpgf::depolarize2(rpgf::depolarize2(rho, m1), m2),
                       rpgf::depolarize2(rho, m1 * m2), 1e-12));
  }
  const BellDiagonalState s{0.9, 1.0};
  CHECK(rpgf::dephase(rpgf::dephase(s, 0.4), 0.9).F ==
        doctest::Approx(rpgf::dephase(s, 1.3).F).epsilon(1e-15));
}

TEST_CASE("family realization is physical and dephases on either qubit") {
  for (const double F : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (const double mu : {0.0, 0.3, 0.9, 1.0}) {
      const DensityMatrix m = rpgf::realize({F, mu});
      check_physical(m);
      CHECK(approx_equal(rpgf::pauli_z_conjugate(m, 0), rpgf::pauli_z_conjugate(m, 1),
                         1e-14));
      for (const double alpha : {0.0, 0.3, 1.7}) {
        const DensityMatrix via_family = rpgf::realize(rpgf::dephase({F, mu}, alpha));
        CHECK(approx_equal(rpgf::dephase(m, alpha, 0), via_family, 1e-14));
        CHECK(approx_equal(rpgf::dephase(m, alpha, 1), via_family, 1e-14));
      }
      CHECK(approx_equal(rpgf::depolarize2(m, 0.7), rpgf::realize(rpgf::depolarize2({F, mu}, 0.7)),
                         1e-14));
    }
  }
}

TEST_CASE("fidelity decay and swap composition follow the closed rules") {
  CHECK(rpgf::dephase({1.0, 1.0}, std::log(2.0)).F == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(rpgf::swap_family({1.0, 1.0}, {0.75, 1.0}, 1.0).F ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(rpgf::swap_family({0.75, 1.0}, {0.75, 1.0}, 1.0).F ==
        doctest::Approx(0.625).epsilon(1e-15));
  const BellDiagonalState d = rpgf::swap_family({0.9, 0.9}, {0.8, 0.8}, 0.7);
  CHECK(d.mu == doctest::Approx(0.9 * 0.8 * 0.7).epsilon(1e-15));
  // The ring-only composition works on exact rationals as well.
  const rpgf::ExactRational fd =
      rpgf::swap_fidelity(rpgf::ExactRational(3, 4), rpgf::ExactRational(3, 4));
  CHECK(fd == rpgf::ExactRational(5, 8));
}

TEST_CASE("full-matrix swap agrees with the parametric family") {
  std::mt19937_64 rng(303);
  const DensityMatrix psi_plus = rpgf::realize({1.0, 1.0});
  CHECK(approx_equal(rpgf::swap_full(psi_plus, psi_plus, 1.0), psi_plus, 1e-14));
  for (int trial = 0; trial < 40; ++trial) {
    const BellDiagonalState a = random_family(rng);
    const BellDiagonalState b = random_family(rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double mu = u(rng);
    const DensityMatrix full = rpgf::swap_full(rpgf::realize(a), rpgf::realize(b), mu);
    check_physical(full);
    CHECK(approx_equal(full, rpgf::realize(rpgf::swap_family(a, b, mu)), 1e-12));
  }

  DensityMatrix zz(4);  // middle qubits end up in |00>, orthogonal to Psi+
  zz.at(0, 0) = 1.0;
  CHECK_THROWS_AS(rpgf::swap_full(zz, zz, 1.0), std::runtime_error);
}

TEST_CASE("random channel pipelines preserve physicality") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    DensityMatrix rho = random_density(rng, 4);
    for (int step = 0; step < 4; ++step) {
      switch (rng() % 3) {
        case 0: rho = rpgf::dephase(rho, 2.0 * u(rng), static_cast<int>(rng() % 2)); break;
        case 1: rho = rpgf::depolarize2(rho, u(rng)); break;
        default: rho = rpgf::swap_full(rho, random_density(rng, 4), 0.5 + u(rng) / 2.0); break;
      }
      check_physical(rho);
    }
  }
}

TEST_CASE("smallest eigenvalue matches the reference solver") {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const std::size_t dim : {std::size_t{4}, std::size_t{16}}) {
    for (int trial = 0; trial < 10; ++trial) {
      // A random Hermitian (not necessarily positive) matrix.
      DensityMatrix m(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        m.at(i, i) = u(rng);
        for (std::size_t j = i + 1; j < dim; ++j) {
          m.at(i, j) = {u(rng), u(rng)};
          m.at(j, i) = std::conj(m.at(i, j));
        }
      }
      Eigen::MatrixXcd em(dim, dim);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) em(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(j)) = m.at(i, j);
      }
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em);
      CHECK(m.min_eigenvalue() ==
            doctest::Approx(solver.eigenvalues().minCoeff()).epsilon(1e-10));
    }
  }
}

TEST_CASE("final-state error rates") {
  const rpgf::Qbers perfect = rpgf::qbers({4, 1.0, 1.0, 1.0, 1.0});
  CHECK(perfect.e_z == 0.0);
  CHECK(perfect.e_x == 0.0);

  const rpgf::Qbers two_seg = rpgf::qbers({2, 1.0, 0.97, 0.97, 1.0});
  CHECK(two_seg.e_z == doctest::Approx(0.0436635).epsilon(1e-6));

  const rpgf::Qbers eight = rpgf::qbers({8, 1.0, 0.99, 0.99, 0.9769});
  CHECK(eight.e_x == doctest::Approx(0.0799).epsilon(2e-3));
  const double r = 1.0 - binary_entropy(eight.e_x) - binary_entropy(eight.e_z);
  CHECK(r == doctest::Approx(0.2323).epsilon(0.02));

  const BellDiagonalState s = rpgf::final_state({3, 0.9, 0.95, 0.9, 0.8});
  CHECK(s.mu == doctest::Approx(0.9 * 0.9 * std::pow(0.95, 3)).epsilon(1e-12));
  CHECK(s.F == doctest::Approx((1.0 + std::pow(0.8, 3) * 0.8) / 2.0).epsilon(1e-12));
}

TEST_CASE("repeated swapping reproduces the final-state expression") {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<std::int64_t> draw(1, 6);
  const double alpha = 0.37, f0 = 0.93, mu0 = 0.97, mu = 0.95;

  const auto leaf = [&](std::int64_t ready) {
    return Block{rpgf::realize({f0, mu0}), ready};
  };
  const auto verify = [&](const MergeResult& got, int n, DephasingPolicy policy,
                          const std::vector<std::int64_t>& samples) {
    CHECK(got.dephasing == rpgf::dephasing_value(policy, samples));
    const FinalStateParams params{n, f0, mu0, mu,
                                  std::exp(-alpha * static_cast<double>(got.dephasing))};
    CHECK(approx_equal(got.rho, rpgf::realize(rpgf::final_state(params)), 1e-12));
    check_physical(got.rho);
  };

  SUBCASE("earliest-ready greedy order") {
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 7);  // 2..8
      std::vector<std::int64_t> samples(n);
      for (auto& v : samples) v = draw(rng);
      std::vector<Block> blocks;
      for (const auto v : samples) blocks.push_back(leaf(v));
      std::int64_t total = 0;
      while (blocks.size() > 1) {
        std::size_t best = 0;
        std::int64_t best_ready = std::max(blocks[0].ready, blocks[1].ready);
        for (std::size_t i = 1; i + 1 < blocks.size(); ++i) {
          const std::int64_t ready = std::max(blocks[i].ready, blocks[i + 1].ready);
          if (ready < best_ready) {
            best = i;
            best_ready = ready;
          }
        }
        MergeResult merged = merge_pair(blocks[best], blocks[best + 1], alpha, mu, total);
        total = merged.dephasing;
        blocks[best] = {std::move(merged.rho), merged.ready};
        blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(best) + 1);
      }
      verify({std::move(blocks[0].rho), blocks[0].ready, total}, n,
             DephasingPolicy::OptimalGreedy, samples);
    }
  }

  SUBCASE("doubling order") {
    for (const int n : {2, 4, 8}) {
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<std::int64_t> samples(n);
        for (auto& v : samples) v = draw(rng);
        std::int64_t total = 0;
        const auto recurse = [&](auto&& self, int lo, int hi) -> Block {
          if (hi - lo == 1) return leaf(samples[static_cast<std::size_t>(lo)]);
          const int mid = lo + (hi - lo) / 2;
          const Block left = self(self, lo, mid);
          const Block right = self(self, mid, hi);
          MergeResult merged = merge_pair(left, right, alpha, mu, total);
          total = merged.dephasing;
          return {std::move(merged.rho), merged.ready};
        };
        Block root = recurse(recurse, 0, n);
        verify({std::move(root.rho), root.ready, total}, n, DephasingPolicy::Doubling,
               samples);
      }
    }
  }

  SUBCASE("iterative order, parallel and sequential readiness") {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 4);  // 2..5
      std::vector<std::int64_t> samples(n);
      for (auto& v : samples) v = draw(rng);

      std::int64_t total = 0;
      Block acc = leaf(samples[0]);
      for (int i = 1; i < n; ++i) {
        MergeResult merged =
            merge_pair(acc, leaf(samples[static_cast<std::size_t>(i)]), alpha, mu, total);
        total = merged.dephasing;
        acc = {std::move(merged.rho), merged.ready};
      }
      verify({std::move(acc.rho), acc.ready, total}, n, DephasingPolicy::Iterative, samples);

      // Sequential distribution: segment i only starts after the block is
      // ready, so its link lands at the cumulative sum and only the stored
      // block waits.
      total = 0;
      std::int64_t cumulative = samples[0];
      Block seq = leaf(cumulative);
      for (int i = 1; i < n; ++i) {
        cumulative += samples[static_cast<std::size_t>(i)];
        MergeResult merged = merge_pair(seq, leaf(cumulative), alpha, mu, total);
        total = merged.dephasing;
        seq = {std::move(merged.rho), merged.ready};
      }
      CHECK(total == std::accumulate(samples.begin() + 1, samples.end(), std::int64_t{0}));
      verify({std::move(seq.rho), seq.ready, total}, n, DephasingPolicy::Sequential, samples);
    }
  }
}

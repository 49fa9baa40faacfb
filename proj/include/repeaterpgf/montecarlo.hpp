// Stochastic oracle: trajectory-by-trajectory simulation of repeater schemes
// with deterministic counter-based seeding, used to cross-check every
// analytic quantity (including cutoff schemes with no closed form).
#pragma once

#include <cstdint>
#include <vector>

#include "repeaterpgf/scheme.hpp"

namespace rpgf {

struct TrajectoryOutcome {
  std::int64_t k = 0;         // total elementary time steps
  std::int64_t d = 0;         // accumulated dephasing steps (scheme convention)
  std::int64_t restarts = 0;  // cutoff-triggered resets
  friend bool operator==(const TrajectoryOutcome&, const TrajectoryOutcome&) = default;
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  std::uint64_t max_attempts = 1000000000ULL;  // per-trajectory step guard
  int shards = 1;
};

// All trajectories for the given configuration, in shard-major order.  The
// stream is a pure function of (seed, shard count, samples); the shard count
// only partitions the work, and identical configurations give identical
// results no matter how many threads execute them.
std::vector<TrajectoryOutcome> simulate(const SchemeSpec& scheme, double p,
                                        const SimConfig& config);

struct EstimateResult {
  double mean_k = 0.0, se_k = 0.0;
  double mean_d = 0.0, se_d = 0.0;
  double mean_exp = 0.0, se_exp = 0.0;  // E[exp(-alpha D)] and its std. error
  std::uint64_t samples = 0;
};

// Streaming aggregation of K, D and exp(-alpha D); per-shard partial sums are
// combined in shard order so the result is bit-identical across runs.
EstimateResult estimate(const SchemeSpec& scheme, double p, double alpha,
                        const SimConfig& config);

struct EmpiricalPmf {
  std::vector<std::uint64_t> k_counts;  // index 0..max_k
  std::vector<std::uint64_t> d_counts;
  std::uint64_t k_overflow = 0;
  std::uint64_t d_overflow = 0;
  std::uint64_t samples = 0;

  std::vector<double> k_pmf() const;
  std::vector<double> d_pmf() const;
};

EmpiricalPmf empirical_pmf(const SchemeSpec& scheme, double p, const SimConfig& config,
                           std::int64_t max_k);

// Pearson chi-square goodness-of-fit p-value of observed bin counts against
// analytic probabilities (probs[i] for bin i; the residual mass and the
// overflow count form a tail bin).  Bins with expected count < 5 are pooled.
double chi_square_pvalue(const std::vector<std::uint64_t>& observed,
                         std::uint64_t overflow, const std::vector<double>& probs);

}  // namespace rpgf

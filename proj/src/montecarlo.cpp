#include "repeaterpgf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <utility>

#include <boost/math/special_functions/gamma.hpp>

namespace rpgf {
namespace {

using u64 = std::uint64_t;
using i64 = std::int64_t;

u64 mix64(u64 x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based generator: the value stream is a pure function of
// (seed, shard, trajectory), so the thread schedule cannot affect samples.
class CounterRng {
public:
  CounterRng(u64 seed, u64 shard, u64 trajectory)
      : base_(mix64(mix64(seed ^ 0x243f6a8885a308d3ULL) + 0x9e3779b97f4a7c15ULL * shard) +
              0xd1b54a32d192ed03ULL * trajectory) {}

  u64 next() { return mix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  double uniform_open() {  // uniform on the open interval (0, 1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

private:
  u64 base_;
  u64 counter_ = 0;
};

// Inverse-CDF geometric sampling: k = ceil(ln U / ln q), exact and branch-free
// apart from the p = 1 degenerate case.
class GeoSampler {
public:
  explicit GeoSampler(double p) : p_(p) {
    if (!(p > 0.0) || p > 1.0) {
      throw std::domain_error("montecarlo: success probability must be in (0, 1]");
    }
    log_q_ = p < 1.0 ? std::log1p(-p) : 0.0;
  }

  i64 draw(CounterRng& rng) const {
    if (p_ >= 1.0) return 1;
    const double k = std::ceil(std::log(rng.uniform_open()) / log_q_);
    if (!(k >= 1.0)) return 1;
    return static_cast<i64>(std::min(k, 4.0e18));
  }

private:
  double p_;
  double log_q_;
};

enum class Kind {
  SequentialPlain,
  SequentialGlobal,
  SequentialVector,
  ParallelPlain,
  ParallelPairCutoff,
  ThreeSegmentVariant,
};

struct Junction {
  int llo, lhi, rlo, rhi;  // segment ranges [llo,lhi) and [rlo,rhi) joined here
};

std::vector<Junction> junction_blocks(Swapping swapping, int n) {
  std::vector<Junction> out;
  const auto single = [&](int j) { out.push_back({j, j + 1, j + 1, j + 2}); };
  const auto block = [&](int llo, int lhi, int rhi) { out.push_back({llo, lhi, lhi, rhi}); };
  switch (swapping) {
    case Swapping::None:
      if (n > 2) throw std::invalid_argument("montecarlo: swapping policy required for n > 2");
      if (n == 2) single(0);
      return out;
    case Swapping::Optimal:
      for (int j = 0; j + 1 < n; ++j) single(j);
      return out;
    case Swapping::Doubling: {
      if (n != 2 && n != 4 && n != 8) {
        throw std::invalid_argument("montecarlo: doubling needs n in {2, 4, 8}");
      }
      const auto recurse = [&](auto&& self, int lo, int hi) -> void {
        if (hi - lo == 1) return;
        const int mid = lo + (hi - lo) / 2;
        self(self, lo, mid);
        self(self, mid, hi);
        block(lo, mid, hi);
      };
      recurse(recurse, 0, n);
      return out;
    }
    case Swapping::Iterative:
      for (int j = 0; j + 1 < n; ++j) block(0, j + 1, j + 2);
      return out;
    case Swapping::Mixed31:
      if (n != 4) throw std::invalid_argument("montecarlo: mixed-3-1 needs n = 4");
      single(0);
      single(1);
      block(0, 3, 4);
      return out;
    case Swapping::Mixed44:
      if (n != 8) throw std::invalid_argument("montecarlo: mixed-4-4 needs n = 8");
      for (const int j : {0, 1, 2, 4, 5, 6}) single(j);
      block(0, 4, 8);
      return out;
    case Swapping::Mixed2222:
      if (n != 8) throw std::invalid_argument("montecarlo: mixed-2-2-2-2 needs n = 8");
      for (const int j : {0, 2, 4, 6}) single(j);
      block(0, 2, 4);
      block(2, 4, 6);
      block(4, 6, 8);
      return out;
    case Swapping::Mixed242:
      if (n != 8) throw std::invalid_argument("montecarlo: mixed-2-4-2 needs n = 8");
      single(0);
      for (const int j : {2, 3, 4}) single(j);
      single(6);
      block(0, 2, 6);
      block(2, 6, 8);
      return out;
  }
  throw std::invalid_argument("montecarlo: unknown swapping policy");
}

struct SchemeSim {
  Kind kind = Kind::ParallelPlain;
  int n = 1;
  GeoSampler geo;
  u64 max_attempts = 0;
  i64 m = 0;                        // global / pairwise cutoff
  std::vector<i64> mvec;            // per-memory cutoff vector
  std::vector<Junction> junctions;  // parallel swap structure
  ThreeSegmentLayout layout = ThreeSegmentLayout::parallel_optimal;
  bool immediate = false;

  TrajectoryOutcome run(CounterRng& rng) const {
    switch (kind) {
      case Kind::SequentialPlain: return run_sequential(rng);
      case Kind::SequentialGlobal: return run_sequential_global(rng);
      case Kind::SequentialVector: return run_sequential_vector(rng);
      case Kind::ParallelPlain: return run_parallel(rng);
      case Kind::ParallelPairCutoff: return run_pair_cutoff(rng);
      case Kind::ThreeSegmentVariant: return run_three_variant(rng);
    }
    throw std::logic_error("montecarlo: unknown scheme kind");
  }

  TrajectoryOutcome run_sequential(CounterRng& rng) const {
    TrajectoryOutcome out;
    for (int i = 0; i < n; ++i) {
      const i64 g = geo.draw(rng);
      out.k += g;
      if (i > 0) out.d += g;
    }
    return out;
  }

  // After the first link, the remaining n-1 links must all complete within a
  // window of m steps or everything is discarded.
  TrajectoryOutcome run_sequential_global(CounterRng& rng) const {
    TrajectoryOutcome out;
    for (;;) {
      out.k += geo.draw(rng);
      i64 used = 0;
      bool done = true;
      for (int link = 1; link < n; ++link) {
        const i64 g = geo.draw(rng);
        if (used + g > m) {
          out.k += m - used;
          done = false;
          break;
        }
        used += g;
        out.k += g;
      }
      if (done) {
        out.d = used;
        return out;
      }
      ++out.restarts;
      guard(out.k);
    }
  }

  // Each stored state may wait at most mvec[j] steps for the next link; a
  // miss restarts the whole prefix from scratch.
  TrajectoryOutcome run_sequential_vector(CounterRng& rng) const {
    TrajectoryOutcome out;
    for (;;) {
      out.k += geo.draw(rng);
      bool done = true;
      i64 d = 0;
      for (int j = 0; j + 1 < n; ++j) {
        const i64 g = geo.draw(rng);
        if (g > mvec[static_cast<std::size_t>(j)]) {
          out.k += mvec[static_cast<std::size_t>(j)];
          done = false;
          break;
        }
        out.k += g;
        d += g;
      }
      if (done) {
        out.d = d;
        return out;
      }
      ++out.restarts;
      guard(out.k);
    }
  }

  // All segments generate at once; the swap structure fixes when each pair of
  // memories is consumed.  The scheme-level dephasing count is half the total
  // number of memory-steps waited (both qubits of every pair accrue noise).
  TrajectoryOutcome run_parallel(CounterRng& rng) const {
    std::vector<i64> t(static_cast<std::size_t>(n));
    for (auto& v : t) v = geo.draw(rng);
    TrajectoryOutcome out;
    out.k = *std::max_element(t.begin(), t.end());
    if (n == 1) return out;
    i64 steps = (out.k - t.front()) + (out.k - t.back());
    for (const auto& jn : junctions) {
      i64 swap_time = 0;
      for (int s = jn.llo; s < jn.rhi; ++s) {
        swap_time = std::max(swap_time, t[static_cast<std::size_t>(s)]);
      }
      steps += (swap_time - t[static_cast<std::size_t>(jn.lhi - 1)]) +
               (swap_time - t[static_cast<std::size_t>(jn.rlo)]);
    }
    if (steps % 2 != 0) throw std::logic_error("montecarlo: odd memory-step total");
    out.d = steps / 2;
    return out;
  }

  // Two segments in parallel; the early memory waits at most m steps for the
  // late one, otherwise both pairs are discarded.
  TrajectoryOutcome run_pair_cutoff(CounterRng& rng) const {
    TrajectoryOutcome out;
    for (;;) {
      const i64 a = geo.draw(rng);
      const i64 b = geo.draw(rng);
      if (std::abs(a - b) <= m) {
        out.k += std::max(a, b);
        out.d = std::abs(a - b);
        return out;
      }
      out.k += std::min(a, b) + m;
      ++out.restarts;
      guard(out.k);
    }
  }

  // Segment start times follow the layout; swapping is as soon as possible.
  // Every memory dephases from its creation until it is measured: interior
  // memories at their swap, end memories immediately ("imm") or at the end
  // of the protocol ("non").
  TrajectoryOutcome run_three_variant(CounterRng& rng) const {
    const i64 n1 = geo.draw(rng);
    const i64 n2 = geo.draw(rng);
    const i64 n3 = geo.draw(rng);
    i64 e1 = 0, e2 = 0, e3 = 0;  // completion times by position
    switch (layout) {
      case ThreeSegmentLayout::seq_a:
        e1 = n1; e2 = e1 + n2; e3 = e2 + n3;
        break;
      case ThreeSegmentLayout::seq_b:
        e1 = n1; e3 = e1 + n3; e2 = e3 + n2;
        break;
      case ThreeSegmentLayout::seq_c:
        e2 = n2; e1 = e2 + n1; e3 = e1 + n3;
        break;
      case ThreeSegmentLayout::start_a:
        e1 = n1; e2 = n2; e3 = std::max(e1, e2) + n3;
        break;
      case ThreeSegmentLayout::start_b:
        e1 = n1; e3 = n3; e2 = std::max(e1, e3) + n2;
        break;
      case ThreeSegmentLayout::end_a:
        e2 = n2; e1 = e2 + n1; e3 = e2 + n3;
        break;
      case ThreeSegmentLayout::end_b:
        e1 = n1; e2 = e1 + n2; e3 = e1 + n3;
        break;
      case ThreeSegmentLayout::over_a:
        e1 = n1; e2 = n2; e3 = std::min(e1, e2) + n3;
        break;
      case ThreeSegmentLayout::over_b:
        e1 = n1; e3 = n3; e2 = std::min(e1, e3) + n2;
        break;
      case ThreeSegmentLayout::parallel_optimal:
        e1 = n1; e2 = n2; e3 = n3;
        break;
    }
    const i64 swap1 = std::max(e1, e2);
    const i64 swap2 = std::max(e2, e3);
    const i64 end = std::max(swap1, swap2);
    TrajectoryOutcome out;
    out.k = end;
    out.d = (swap1 - e1) + (swap1 - e2) + (swap2 - e2) + (swap2 - e3);
    if (!immediate) out.d += (end - e1) + (end - e3);
    return out;
  }

  void guard(i64 k) const {
    if (static_cast<u64>(k) > max_attempts) {
      throw std::runtime_error("montecarlo: max_attempts exceeded (pathological p?)");
    }
  }
};

SchemeSim build_sim(const SchemeSpec& scheme, double p, const SimConfig& config) {
  scheme.validate();
  SchemeSim sim{.kind = Kind::ParallelPlain,
                .n = scheme.n,
                .geo = GeoSampler(p),
                .max_attempts = config.max_attempts};
  switch (scheme.distribution) {
    case Distribution::FullySequential:
      switch (scheme.cutoff.kind) {
        case Cutoff::Kind::None:
          sim.kind = Kind::SequentialPlain;
          return sim;
        case Cutoff::Kind::Global:
          if (scheme.cutoff.m < scheme.n - 1) {
            throw std::invalid_argument("montecarlo: global cutoff below n-1 never succeeds");
          }
          sim.kind = Kind::SequentialGlobal;
          sim.m = scheme.cutoff.m;
          return sim;
        case Cutoff::Kind::Vector:
          if (static_cast<int>(scheme.cutoff.vec.m.size()) != scheme.n - 1) {
            throw std::invalid_argument("montecarlo: cutoff vector needs n-1 entries");
          }
          for (const auto mj : scheme.cutoff.vec.m) {
            if (mj < 1) throw std::invalid_argument("montecarlo: cutoff entries must be >= 1");
          }
          sim.kind = Kind::SequentialVector;
          sim.mvec = scheme.cutoff.vec.m;
          return sim;
      }
      break;
    case Distribution::Parallel:
      switch (scheme.cutoff.kind) {
        case Cutoff::Kind::None:
          sim.kind = Kind::ParallelPlain;
          sim.junctions = junction_blocks(scheme.swapping, scheme.n);
          return sim;
        case Cutoff::Kind::Global:
          if (scheme.n != 2) {
            throw std::invalid_argument("montecarlo: pairwise cutoff is a two-segment scheme");
          }
          if (scheme.cutoff.m < 0) throw std::invalid_argument("montecarlo: cutoff must be >= 0");
          sim.kind = Kind::ParallelPairCutoff;
          sim.m = scheme.cutoff.m;
          return sim;
        case Cutoff::Kind::Vector:
          throw std::invalid_argument("montecarlo: vector cutoff applies to sequential schemes");
      }
      break;
    case Distribution::ThreeSegmentVariant:
      if (scheme.n != 3 || !scheme.layout.has_value()) {
        throw std::invalid_argument("montecarlo: layout variants are three-segment schemes");
      }
      if (scheme.cutoff.kind != Cutoff::Kind::None) {
        throw std::invalid_argument("montecarlo: no cutoff support for layout variants");
      }
      sim.kind = Kind::ThreeSegmentVariant;
      sim.layout = *scheme.layout;
      sim.immediate = scheme.measurement == Measurement::Immediate;
      return sim;
  }
  throw std::invalid_argument("montecarlo: unsupported scheme");
}

struct ShardRange {
  int index;
  u64 count;
};

std::vector<ShardRange> shard_ranges(u64 samples, int shards) {
  if (shards < 1) throw std::invalid_argument("montecarlo: shard count must be >= 1");
  std::vector<ShardRange> out;
  const u64 s = static_cast<u64>(shards);
  for (int i = 0; i < shards; ++i) {
    const u64 count = samples / s + (static_cast<u64>(i) < samples % s ? 1 : 0);
    out.push_back({i, count});
  }
  return out;
}

// Runs fn(shard, trajectory_in_shard, outcome) for every trajectory, one
// thread per shard; fn touches shard-private state only.
template <class Fn>
void run_all(const SchemeSim& sim, const SimConfig& config, Fn&& fn) {
  const auto ranges = shard_ranges(config.samples, config.shards);
  std::vector<std::exception_ptr> errors(ranges.size());
  std::vector<std::thread> threads;
  threads.reserve(ranges.size());
  for (std::size_t idx = 0; idx < ranges.size(); ++idx) {
    threads.emplace_back([&, idx] {
      try {
        const auto& range = ranges[idx];
        for (u64 t = 0; t < range.count; ++t) {
          CounterRng rng(config.seed, static_cast<u64>(range.index), t);
          fn(static_cast<std::size_t>(range.index), t, sim.run(rng));
        }
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace

std::vector<TrajectoryOutcome> simulate(const SchemeSpec& scheme, double p,
                                        const SimConfig& config) {
  const SchemeSim sim = build_sim(scheme, p, config);
  const auto ranges = shard_ranges(config.samples, config.shards);
  std::vector<u64> offsets(ranges.size(), 0);
  u64 acc = 0;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    offsets[i] = acc;
    acc += ranges[i].count;
  }
  std::vector<TrajectoryOutcome> out(acc);
  run_all(sim, config, [&](std::size_t shard, u64 traj, const TrajectoryOutcome& o) {
    out[offsets[shard] + traj] = o;
  });
  return out;
}

EstimateResult estimate(const SchemeSpec& scheme, double p, double alpha,
                        const SimConfig& config) {
  if (alpha < 0.0) throw std::domain_error("montecarlo: alpha must be >= 0");
  const SchemeSim sim = build_sim(scheme, p, config);
  struct Partial {
    double k = 0, k2 = 0, d = 0, d2 = 0, e = 0, e2 = 0;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(config.shards));
  run_all(sim, config, [&](std::size_t shard, u64, const TrajectoryOutcome& o) {
    auto& part = partials[shard];
    const double k = static_cast<double>(o.k);
    const double d = static_cast<double>(o.d);
    const double e = std::exp(-alpha * d);
    part.k += k;
    part.k2 += k * k;
    part.d += d;
    part.d2 += d * d;
    part.e += e;
    part.e2 += e * e;
  });
  Partial sum;
  for (const auto& part : partials) {  // fixed order: bit-identical merges
    sum.k += part.k;
    sum.k2 += part.k2;
    sum.d += part.d;
    sum.d2 += part.d2;
    sum.e += part.e;
    sum.e2 += part.e2;
  }
  EstimateResult res;
  res.samples = config.samples;
  if (config.samples == 0) return res;
  const double inv = 1.0 / static_cast<double>(config.samples);
  const auto finish = [&](double s, double s2, double& mean, double& se) {
    mean = s * inv;
    const double var = std::max(0.0, s2 * inv - mean * mean);
    se = std::sqrt(var * inv);
  };
  finish(sum.k, sum.k2, res.mean_k, res.se_k);
  finish(sum.d, sum.d2, res.mean_d, res.se_d);
  finish(sum.e, sum.e2, res.mean_exp, res.se_exp);
  return res;
}

std::vector<double> EmpiricalPmf::k_pmf() const {
  std::vector<double> out(k_counts.size(), 0.0);
  if (samples == 0) return out;
  for (std::size_t i = 0; i < k_counts.size(); ++i) {
    out[i] = static_cast<double>(k_counts[i]) / static_cast<double>(samples);
  }
  return out;
}

std::vector<double> EmpiricalPmf::d_pmf() const {
  std::vector<double> out(d_counts.size(), 0.0);
  if (samples == 0) return out;
  for (std::size_t i = 0; i < d_counts.size(); ++i) {
    out[i] = static_cast<double>(d_counts[i]) / static_cast<double>(samples);
  }
  return out;
}

EmpiricalPmf empirical_pmf(const SchemeSpec& scheme, double p, const SimConfig& config,
                           std::int64_t max_k) {
  if (max_k < 0) throw std::invalid_argument("montecarlo: max_k must be >= 0");
  const SchemeSim sim = build_sim(scheme, p, config);
  const auto bins = static_cast<std::size_t>(max_k) + 1;
  struct Hist {
    std::vector<u64> k, d;
    u64 k_over = 0, d_over = 0;
  };
  std::vector<Hist> hists(static_cast<std::size_t>(config.shards));
  for (auto& h : hists) {
    h.k.assign(bins, 0);
    h.d.assign(bins, 0);
  }
  run_all(sim, config, [&](std::size_t shard, u64, const TrajectoryOutcome& o) {
    auto& h = hists[shard];
    if (o.k <= max_k) ++h.k[static_cast<std::size_t>(o.k)]; else ++h.k_over;
    if (o.d <= max_k) ++h.d[static_cast<std::size_t>(o.d)]; else ++h.d_over;
  });
  EmpiricalPmf out;
  out.samples = config.samples;
  out.k_counts.assign(bins, 0);
  out.d_counts.assign(bins, 0);
  for (const auto& h : hists) {
    for (std::size_t i = 0; i < bins; ++i) {
      out.k_counts[i] += h.k[i];
      out.d_counts[i] += h.d[i];
    }
    out.k_overflow += h.k_over;
    out.d_overflow += h.d_over;
  }
  return out;
}

double chi_square_pvalue(const std::vector<std::uint64_t>& observed, std::uint64_t overflow,
                         const std::vector<double>& probs) {
  if (observed.size() != probs.size()) {
    throw std::invalid_argument("montecarlo: histogram / probability size mismatch");
  }
  u64 total_count = overflow;
  for (const auto c : observed) total_count += c;
  if (total_count == 0) throw std::invalid_argument("montecarlo: empty histogram");
  const double total = static_cast<double>(total_count);
  double covered = 0.0;
  for (const auto pr : probs) covered += pr;
  const double tail = std::max(0.0, 1.0 - covered);

  // Pool adjacent bins until each pooled bin expects at least 5 counts.
  std::vector<std::pair<double, double>> pooled;  // (observed, expected)
  double obs_acc = 0.0, exp_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    obs_acc += static_cast<double>(observed[i]);
    exp_acc += probs[i] * total;
    if (exp_acc >= 5.0) {
      pooled.emplace_back(obs_acc, exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  obs_acc += static_cast<double>(overflow);
  exp_acc += tail * total;
  if (!pooled.empty() && exp_acc < 5.0) {
    pooled.back().first += obs_acc;
    pooled.back().second += exp_acc;
  } else if (exp_acc > 0.0) {
    pooled.emplace_back(obs_acc, exp_acc);
  }
  if (pooled.size() < 2) return 1.0;
  double stat = 0.0;
  for (const auto& [obs, exp] : pooled) {
    const double diff = obs - exp;
    stat += diff * diff / exp;
  }
  const double dof = static_cast<double>(pooled.size() - 1);
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

}  // namespace rpgf

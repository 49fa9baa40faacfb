#include "repeaterpgf/rates.hpp"

#include "repeaterpgf/catalog.hpp"
#include "repeaterpgf/perm_engine.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace rpgf {

namespace {

// Every finite double is a dyadic rational, so this conversion is exact.
ExactRational exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("exact_from_double: non-finite value");
  return ExactRational(BigRat(x));
}

void check_unit(double x, const char* what) {
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

// 1 - (1-p)^m without cancellation for small p.
double one_minus_qpow(double p, double m) {
  return -std::expm1(m * std::log1p(-p));
}

DephasingPolicy policy_for(Swapping swapping) {
  switch (swapping) {
    case Swapping::Optimal:
    case Swapping::None:  // n <= 2, where every order is optimal
      return DephasingPolicy::OptimalGreedy;
    case Swapping::Doubling: return DephasingPolicy::Doubling;
    case Swapping::Iterative: return DephasingPolicy::Iterative;
    case Swapping::Mixed31: return DephasingPolicy::Mixed31;
    case Swapping::Mixed44: return DephasingPolicy::Mixed44;
    case Swapping::Mixed2222: return DephasingPolicy::Mixed2222;
    case Swapping::Mixed242: return DephasingPolicy::Mixed242;
  }
  throw std::invalid_argument("rates: unknown swapping policy");
}

// Cone enumeration is costly for n = 8, so derived sums are kept for reuse.
const FactoredSum& cached_policy_sum(DephasingPolicy policy, int n) {
  static std::map<std::pair<int, int>, FactoredSum> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(static_cast<int>(policy), n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, policy_pgf_sum(policy, n)).first;
  return it->second;
}

// E[max(N_1..N_n)] = sum_j (-1)^(j+1) C(n,j)/(1-q^j), evaluated stably.
double parallel_k_mean_double(int n, double p) { return parallel_waiting_mean(n, p); }

SchemeStatistics analytic_statistics(const SchemeSpec& scheme, double p, double alpha_eff) {
  const double q = 1.0 - p;
  const double t = std::exp(-alpha_eff);
  SchemeStatistics stats;
  switch (scheme.distribution) {
    case Distribution::FullySequential: {
      if (scheme.cutoff.kind == Cutoff::Kind::None) {
        stats.mean_k = scheme.n / p;
        stats.mean_d = (scheme.n - 1) / p;
        // E[t^D] = (p t / (1 - q t))^(n-1); 1 - qt = (1 - t) + pt.
        const double ratio = p * t / (-std::expm1(-alpha_eff) + p * t);
        stats.exp_dephasing = std::pow(ratio, scheme.n - 1);
        return stats;
      }
      const ExactRational pr = exact_from_double(p);
      const auto pgfs = scheme.cutoff.kind == Cutoff::Kind::Global
                            ? sequential_global_cutoff_pgfs(scheme.n, pr, scheme.cutoff.m)
                            : sequential_vector_cutoff_pgfs(scheme.n, pr, scheme.cutoff.vec);
      stats.mean_k = pgfs.first.mean();
      stats.mean_d = pgfs.second.mean();
      stats.exp_dephasing = pgfs.second.eval(t);
      return stats;
    }
    case Distribution::Parallel: {
      if (scheme.cutoff.kind == Cutoff::Kind::None) {
        stats.mean_k = parallel_k_mean_double(scheme.n, p);
        if (scheme.n == 1) return stats;
        const FactoredSum& sum = cached_policy_sum(policy_for(scheme.swapping), scheme.n);
        stats.mean_d = sum.mean(q);
        stats.exp_dephasing = sum.eval(q, t);
        return stats;
      }
      if (scheme.cutoff.kind == Cutoff::Kind::Global && scheme.n == 2) {
        const auto pgfs = parallel_two_segment_cutoff_pgfs(exact_from_double(p), scheme.cutoff.m);
        stats.mean_k = pgfs.first.mean();
        stats.mean_d = pgfs.second.mean();
        stats.exp_dephasing = pgfs.second.eval(t);
        return stats;
      }
      throw std::invalid_argument("rates: no closed form for a parallel cutoff scheme with n > 2");
    }
    case Distribution::ThreeSegmentVariant: {
      const ExactRational pr = exact_from_double(p);
      stats.mean_k = waiting_time_mean(scheme, pr).to_double();
      const SymbolicPGF d_pgf = fixture_pgf(scheme, pr);
      stats.mean_d = d_pgf.mean();
      stats.exp_dephasing = d_pgf.eval(t);
      return stats;
    }
  }
  throw std::invalid_argument("rates: unknown distribution");
}

}  // namespace

double RepeaterParams::tau_s() const {
  switch (time_model) {
    case TimeModel::SignallingLimited: return L0_km / k_fiber_speed_km_s;
    case TimeModel::ClockLimited: return tau_clock_s;
    case TimeModel::Combined: return tau_clock_s + L0_km / k_fiber_speed_km_s;
  }
  throw std::invalid_argument("RepeaterParams: unknown time model");
}

void RepeaterParams::validate() const {
  if (n < 1 || n > 8) throw std::invalid_argument("RepeaterParams: n must be in [1, 8]");
  if (!(L0_km >= 0.0)) throw std::invalid_argument("RepeaterParams: L0 must be >= 0");
  if (!(p_link > 0.0) || !(p_link <= 1.0)) {
    throw std::invalid_argument("RepeaterParams: p_link must lie in (0, 1]");
  }
  if (!(tau_coh_s > 0.0)) throw std::invalid_argument("RepeaterParams: tau_coh must be > 0");
  if (!(tau_clock_s >= 0.0)) throw std::invalid_argument("RepeaterParams: tau_clock must be >= 0");
  check_unit(mu, "RepeaterParams: mu");
  check_unit(mu0, "RepeaterParams: mu0");
  check_unit(F0, "RepeaterParams: F0");
  if (M < 1) throw std::invalid_argument("RepeaterParams: M must be >= 1");
  if (dephasing_multiplicity != 1 && dephasing_multiplicity != 2) {
    throw std::invalid_argument("RepeaterParams: dephasing multiplicity must be 1 or 2");
  }
}

double success_probability(const RepeaterParams& params) {
  params.validate();
  const double p = params.p_link * std::exp(-params.L0_km / k_attenuation_km);
  return multiplexed_success(p, params.M);
}

double parallel_waiting_mean(int n, double p) {
  if (n < 1) throw std::invalid_argument("parallel_waiting_mean: n must be >= 1");
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("parallel_waiting_mean: p must lie in (0, 1]");
  }
  if (p == 1.0) return 1.0;
  if (n <= 30) {
    // Alternating binomial form; cancellation stays below C(30,15)*eps.
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 1; j <= n; ++j) {
      binom = binom * (n - j + 1) / j;
      const double term = binom / one_minus_qpow(p, j);
      sum += (j % 2 == 1) ? term : -term;
    }
    return sum;
  }
  // sum over k of P(K > k); each term is 1 - (1-q^k)^n.
  const double lq = std::log1p(-p);
  double sum = 0.0;
  for (long long k = 0; k < 100000000; ++k) {
    const double term = one_minus_qpow(std::exp(static_cast<double>(k) * lq), n);
    sum += term;
    if (term < 1e-17) break;
  }
  return sum;
}

double multiplexed_success(double p_single, int M) {
  if (!(p_single > 0.0) || !(p_single <= 1.0)) {
    throw std::invalid_argument("multiplexed_success: p must lie in (0, 1]");
  }
  if (M < 1) throw std::invalid_argument("multiplexed_success: M must be >= 1");
  return M == 1 ? p_single : one_minus_qpow(p_single, M);
}

double inverse_eff_coherence(const RepeaterParams& params) {
  params.validate();
  return params.tau_s() / params.tau_coh_s;
}

double binary_entropy(double x) {
  if (!(x >= 0.0) || !(x <= 1.0)) throw std::invalid_argument("binary_entropy: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double secret_key_fraction_bb84(double e_z, double e_x_avg) {
  const double r = 1.0 - binary_entropy(e_x_avg) - binary_entropy(e_z);
  return r > 0.0 ? r : 0.0;
}

double secret_key_fraction_six_state(const std::array<double, 4>& bell_weights) {
  double total = 0.0;
  double entropy = 0.0;
  for (double w : bell_weights) {
    if (!(w >= -1e-12)) throw std::invalid_argument("six-state: negative Bell weight");
    total += w;
    if (w > 0.0) entropy -= w * std::log2(w);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("six-state: Bell weights must sum to 1");
  }
  const double r = 1.0 - entropy;
  return r > 0.0 ? r : 0.0;
}

std::array<double, 4> bell_weights(const FinalStateParams& params) {
  const BellDiagonalState state = final_state(params);
  const double iso = 0.25 * (1.0 - state.mu);
  return {state.mu * state.F + iso, state.mu * (1.0 - state.F) + iso, iso, iso};
}

SchemeStatistics scheme_statistics(const SchemeSpec& scheme, const RepeaterParams& params,
                                   const std::optional<SimConfig>& mc) {
  scheme.validate();
  params.validate();
  if (scheme.n != params.n) {
    throw std::invalid_argument("scheme_statistics: scheme and params disagree on n");
  }
  const double p = success_probability(params);
  const double alpha_eff = params.dephasing_multiplicity * inverse_eff_coherence(params);
  try {
    return analytic_statistics(scheme, p, alpha_eff);
  } catch (const std::invalid_argument&) {
    if (!mc) throw;
    return mc_scheme_statistics(scheme, params, *mc);
  }
}

SchemeStatistics mc_scheme_statistics(const SchemeSpec& scheme, const RepeaterParams& params,
                                      const SimConfig& config) {
  scheme.validate();
  params.validate();
  const double p = success_probability(params);
  const double alpha_eff = params.dephasing_multiplicity * inverse_eff_coherence(params);
  const EstimateResult est = estimate(scheme, p, alpha_eff, config);
  return {est.mean_k, est.mean_d, est.mean_exp};
}

SchemeStatistics scheme_statistics_at(const SchemeSpec& scheme, double p, double alpha_eff) {
  scheme.validate();
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("scheme_statistics_at: p must lie in (0, 1]");
  }
  if (!(alpha_eff >= 0.0)) {
    throw std::invalid_argument("scheme_statistics_at: alpha must be >= 0");
  }
  return analytic_statistics(scheme, p, alpha_eff);
}

RateResult rate_from_statistics(const SchemeStatistics& stats, const RepeaterParams& params) {
  params.validate();
  RateResult result;
  result.p = success_probability(params);
  result.alpha = inverse_eff_coherence(params);
  result.tau_s = params.tau_s();
  result.mean_k = stats.mean_k;
  result.mean_d = stats.mean_d;
  result.exp_dephasing = stats.exp_dephasing;
  result.raw_rate = 1.0 / (params.M * stats.mean_k);
  const FinalStateParams fs{params.n, params.F0, params.mu0, params.mu, stats.exp_dephasing};
  const Qbers q = qbers(fs);
  result.e_z = q.e_z;
  result.e_x_avg = q.e_x;
  result.skf = secret_key_fraction_bb84(result.e_z, result.e_x_avg);
  result.skr_per_use = result.skf * result.raw_rate;
  if (!(result.tau_s > 0.0)) {
    throw std::domain_error("rates: elementary time unit must be positive for per-second rates");
  }
  result.skr_per_second = result.skr_per_use / result.tau_s;
  return result;
}

RateResult secret_key_rate(const SchemeSpec& scheme, const RepeaterParams& params,
                           const std::optional<SimConfig>& mc) {
  return rate_from_statistics(scheme_statistics(scheme, params, mc), params);
}

double plob(double L_km) {
  if (!(L_km > 0.0)) throw std::invalid_argument("plob: L must be > 0");
  // -log2(1 - eta) via log1p so the deep-attenuation tail (eta near the
  // double epsilon) keeps full relative accuracy.
  const double eta = std::exp(-L_km / k_attenuation_km);
  return -std::log1p(-eta) / std::numbers::ln2;
}

double plob_qr(double L0_km) { return plob(L0_km); }

double minimal_mu(int n, KeyProtocol protocol, MuMode mode) {
  if (n < 2 || n > 8) throw std::invalid_argument("minimal_mu: n must be in [2, 8]");
  const double Q = protocol == KeyProtocol::BB84 ? 0.110 : 0.126;
  const int exponent = mode == MuMode::mu0_eq_1 ? n - 1 : 2 * n - 1;
  return std::pow(1.0 - 2.0 * Q, 1.0 / exponent);
}

std::optional<double> threshold_mu_vs_plob(int n, double L_km, const RepeaterParams& base,
                                           double k) {
  if (n < 2 || n > 8) throw std::invalid_argument("threshold_mu_vs_plob: n must be in [2, 8]");
  if (!(L_km > 0.0)) throw std::invalid_argument("threshold_mu_vs_plob: L must be > 0");
  if (!(k >= 0.0)) throw std::invalid_argument("threshold_mu_vs_plob: k must be >= 0");
  RepeaterParams params = base;
  params.n = n;
  params.L0_km = L_km / n;
  params.validate();
  SchemeSpec scheme;
  scheme.n = n;
  scheme.distribution = Distribution::Parallel;
  scheme.swapping = Swapping::Optimal;
  const SchemeStatistics stats = scheme_statistics(scheme, params);
  const double target = k * plob(L_km);
  const auto skr_at = [&](double mu_value) {
    RepeaterParams point = params;
    point.mu = mu_value;
    point.mu0 = mu_value;
    return rate_from_statistics(stats, point).skr_per_use;
  };
  if (!(skr_at(1.0) > target)) return std::nullopt;
  double lo = minimal_mu(n, KeyProtocol::BB84, MuMode::mu0_eq_mu);
  double hi = 1.0;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (skr_at(mid) > target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

RepeaterParams multiplex(const RepeaterParams& params) {
  params.validate();
  RepeaterParams effective = params;
  effective.tau_coh_s = params.tau_coh_s * params.M;
  effective.M = 1;
  return effective;
}

double multiplex_midpoint(int M) {
  if (M < 3) {
    throw std::invalid_argument(
        "multiplex_midpoint: ln(p_eff) has no interior curvature minimum before M = 3");
  }
  const auto log_peff = [M](double L0) {
    const double p = std::exp(-L0 / k_attenuation_km);
    return std::log(one_minus_qpow(p, M));
  };
  const double step = 0.01;
  const auto curvature = [&](double L0) {
    return (log_peff(L0 + step) - 2.0 * log_peff(L0) + log_peff(L0 - step)) / (step * step);
  };
  double best = 1.0;
  double best_value = curvature(best);
  for (double L0 = 1.5; L0 <= 400.0; L0 += 0.5) {
    const double value = curvature(L0);
    if (value < best_value) {
      best_value = value;
      best = L0;
    }
  }
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(0.1, best - 1.0);
  double b = best + 1.0;
  double x1 = b - golden * (b - a);
  double x2 = a + golden * (b - a);
  double f1 = curvature(x1);
  double f2 = curvature(x2);
  while (b - a > 1e-7) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = curvature(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = curvature(x2);
    }
  }
  return 0.5 * (a + b);
}

std::optional<double> drop_point_exp_dephasing(const RepeaterParams& params) {
  params.validate();
  const double mu_n = std::pow(params.mu, params.n - 1) * std::pow(params.mu0, params.n);
  const double h_ez = binary_entropy(0.5 * (1.0 - mu_n));
  if (h_ez == 0.0) return std::nullopt;
  const double denom = mu_n * std::pow(2.0 * params.F0 - 1.0, params.n);
  if (!(denom > 0.0)) {
    throw std::domain_error("drop_point_exp_dephasing: requires mu_n (2F0-1)^n > 0");
  }
  return std::sqrt(2.0 * std::log(2.0) * h_ez) / denom;
}

}  // namespace rpgf

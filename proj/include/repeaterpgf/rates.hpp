// Secret-key-rate figures for repeater chains.
//
// Converts physical parameters (segment length, link efficiency, coherence
// and clock times, gate/state depolarization) into the per-channel-use and
// per-second key rates of a scheme, using the exact waiting-time/dephasing
// statistics from the catalog and the permutation engine.  Also provides the
// repeaterless benchmark bounds, minimal depolarization thresholds,
// PLOB-crossing thresholds, multiplexing helpers, and the first-order
// estimate of the distance at which the key fraction drops to zero.

#pragma once

#include "repeaterpgf/montecarlo.hpp"
#include "repeaterpgf/quantum_state.hpp"
#include "repeaterpgf/scheme.hpp"

#include <array>
#include <optional>

namespace rpgf {

inline constexpr double k_attenuation_km = 22.0;
inline constexpr double k_refractive_index = 1.44;
inline constexpr double k_speed_of_light_km_s = 299792.458;
inline constexpr double k_fiber_speed_km_s = k_speed_of_light_km_s / k_refractive_index;

// What limits the elementary time unit tau of one distribution attempt.
enum class TimeModel {
  SignallingLimited,  // tau = L0/c_f (classical heralding over the segment)
  ClockLimited,       // tau = tau_clock (node-receives-photons setups)
  Combined,           // tau = tau_clock + L0/c_f
};

struct RepeaterParams {
  int n = 2;                // segment count
  double L0_km = 100.0;     // segment length
  double p_link = 1.0;      // zero-distance link coupling efficiency, (0, 1]
  double tau_coh_s = 10.0;  // memory coherence time
  double tau_clock_s = 1e-6;
  double mu = 1.0;   // Bell-measurement depolarization survival
  double mu0 = 1.0;  // initial-state depolarization survival
  double F0 = 1.0;   // initial-state fidelity (dephasing part)
  int M = 1;         // multiplexed chains per segment
  int dephasing_multiplicity = 1;  // memories dephasing per stored step (1 or 2)
  TimeModel time_model = TimeModel::SignallingLimited;

  // Elementary time unit in seconds under the chosen time model.  May be
  // zero (L0 = 0, signalling-limited); per-second rates then throw.
  double tau_s() const;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

// Per-attempt success probability p_link e^{-L0/L_att}, with the multiplexing
// map p -> 1-(1-p)^M applied when M > 1.
double success_probability(const RepeaterParams& params);

// The multiplexing map alone: 1-(1-p)^M, evaluated stably for tiny p.
double multiplexed_success(double p_single, int M);

// E[max of n iid geometrics] in double precision for any n >= 1:
// inclusion-exclusion while the binomials stay benign, the tail sum
// sum_{k>=0} (1 - (1-q^k)^n) beyond that.
double parallel_waiting_mean(int n, double p);

// Inverse effective coherence time alpha = tau/tau_coh.
double inverse_eff_coherence(const RepeaterParams& params);

// h(x) = -x log2 x - (1-x) log2 (1-x); h(0) = h(1) = 0 by continuity.
double binary_entropy(double x);

// Asymptotic one-way secret key fractions, clamped at zero.
double secret_key_fraction_bb84(double e_z, double e_x_avg);
double secret_key_fraction_six_state(const std::array<double, 4>& bell_weights);

// Bell-basis weights {Psi+, Psi-, Phi+, Phi-} of the realized final state.
std::array<double, 4> bell_weights(const FinalStateParams& params);

// Exact scheme statistics at the parameters' success probability, with the
// dephasing exponent already scaled by dephasing_multiplicity.
struct SchemeStatistics {
  double mean_k = 0.0;         // E[K]
  double mean_d = 0.0;         // E[D]
  double exp_dephasing = 1.0;  // E[e^{-multiplicity * alpha * D}]
};

struct RateResult {
  double p = 0.0;              // per-attempt success probability (after multiplexing)
  double alpha = 0.0;          // inverse effective coherence time
  double tau_s = 0.0;          // elementary time unit in seconds
  double mean_k = 0.0;         // E[K]
  double mean_d = 0.0;         // E[D]
  double exp_dephasing = 1.0;  // E[e^{-multiplicity * alpha * D}]
  double raw_rate = 0.0;       // 1/(M E[K]) per channel use
  double e_z = 0.0;
  double e_x_avg = 0.0;
  double skf = 0.0;            // BB84 secret key fraction, clamped at >= 0
  double skr_per_use = 0.0;    // skf * raw_rate
  double skr_per_second = 0.0; // skr_per_use / tau
};

// Waiting-time and dephasing statistics of a scheme.  Closed forms cover
// fully sequential distribution (with or without cutoffs), parallel
// distribution without cutoff for every swapping policy, the two-segment
// parallel cutoff, and the three-segment variants; anything else needs the
// Monte Carlo fallback and throws std::invalid_argument when `mc` is empty.
SchemeStatistics scheme_statistics(const SchemeSpec& scheme, const RepeaterParams& params,
                                   const std::optional<SimConfig>& mc = std::nullopt);

// Monte Carlo estimate of the same statistics: the fallback used above and a
// direct cross-check oracle for the analytic path.
SchemeStatistics mc_scheme_statistics(const SchemeSpec& scheme, const RepeaterParams& params,
                                      const SimConfig& config);

// Closed-form statistics at an explicitly supplied per-attempt success
// probability and dephasing exponent, for callers (the optical-encoding
// layer) that derive p themselves.  Analytic only: throws
// std::invalid_argument for scheme families without a closed form.
SchemeStatistics scheme_statistics_at(const SchemeSpec& scheme, double p, double alpha_eff);

// Assembles QBERs and rates from precomputed statistics (cheap; the
// statistics do not depend on mu/mu0/F0, so threshold scans reuse them).
RateResult rate_from_statistics(const SchemeStatistics& stats, const RepeaterParams& params);

RateResult secret_key_rate(const SchemeSpec& scheme, const RepeaterParams& params,
                           const std::optional<SimConfig>& mc = std::nullopt);

// Repeaterless bound -log2(1-e^{-L/L_att}) and its single-segment
// (repeater-assisted) counterpart.
double plob(double L_km);
double plob_qr(double L0_km);

enum class KeyProtocol { BB84, SixState };
enum class MuMode { mu0_eq_1, mu0_eq_mu };

// Smallest depolarization survival mu giving a non-zero one-way key
// fraction in the zero-dephasing limit: solves mu^(n-1) = 1-2Q (mu0 = 1) or
// mu^(2n-1) = 1-2Q (mu0 = mu) with Q = 0.110 (BB84) or 0.126 (six-state).
double minimal_mu(int n, KeyProtocol protocol, MuMode mode);

// Smallest mu = mu0 for which the swap-asap scheme's key rate per channel
// use reaches k times plob(L) at total distance L (segments L/n; the other
// fields of `base` are kept).  Bisection to within 1e-4; std::nullopt when
// even mu = 1 stays below the target.
std::optional<double> threshold_mu_vs_plob(int n, double L_km, const RepeaterParams& base,
                                           double k);

// The M = 1 repeater equivalent to a multiplexed one in the long-distance
// regime: same parameters with tau_coh scaled by M.
RepeaterParams multiplex(const RepeaterParams& params);

// Midpoint of the interpolating regime of p_eff(L0) = 1-(1-e^{-L0/L_att})^M:
// the argmin of the second derivative of ln p_eff (central differences with
// 0.01 km steps, golden-section refinement).  Requires M >= 3; below that
// the curvature has no interior minimum.
double multiplex_midpoint(int M);

// First-order estimate of the average dephasing fraction E[e^{-alpha D}] at
// which the BB84 key fraction reaches zero:
// sqrt(2 ln2 h(e_z)) / (mu^(n-1) mu0^n (2F0-1)^n).  std::nullopt when
// h(e_z) = 0 (no drop at any distance); throws std::domain_error when the
// denominator is not positive.
std::optional<double> drop_point_exp_dephasing(const RepeaterParams& params);

}  // namespace rpgf

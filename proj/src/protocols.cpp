#include "repeaterpgf/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rpgf {

namespace {

constexpr double k_gamma_lo = 1e-4;
constexpr double k_gamma_hi = 1.0;

// Two-photon weight that survives to the midpoint and still heralds: the
// doubly excited component keeps (1 - eta) of its chances of a lone click
// with number resolution, and (1 - 3 eta / 4) when double clicks pass too.
double surviving_double_weight(double gamma, double eta, Detector detector) {
  const double keep = detector == Detector::PNRD ? 1.0 - eta : 1.0 - 0.75 * eta;
  return gamma * gamma * keep;
}

void check_gamma_eta(double gamma, double eta, const char* who) {
  if (!(gamma > 0.0)) throw std::invalid_argument(std::string(who) + ": gamma must be > 0");
  if (!(eta > 0.0) || !(eta <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": eta must lie in (0, 1]");
  }
}

}  // namespace

void PauliChannelTuple::validate() const {
  for (double v : {p_i, p_x, p_y, p_z}) {
    if (!(v >= -1e-12) || !(v <= 1.0 + 1e-12)) {
      throw std::invalid_argument("PauliChannelTuple: probabilities must lie in [0, 1]");
    }
  }
  if (std::abs(sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("PauliChannelTuple: probabilities must sum to 1");
  }
}

void ProtocolSpec::validate() const {
  switch (variant) {
    case Variant::DualRail:
      return;
    case Variant::SingleRail:
      if (!(gamma > 0.0)) throw std::invalid_argument("ProtocolSpec: gamma must be > 0");
      return;
    case Variant::TwinFieldHook:
      if (!(hook_success > 0.0) || !(hook_success <= 1.0)) {
        throw std::invalid_argument("ProtocolSpec: hook success must lie in (0, 1]");
      }
      hook_channel.validate();
      return;
  }
  throw std::invalid_argument("ProtocolSpec: unknown variant");
}

double single_rail_transmission(const RepeaterParams& params) {
  params.validate();
  return params.p_link * std::exp(-params.L0_km / (2.0 * k_attenuation_km));
}

double single_rail_success(double gamma, double eta, Detector detector) {
  check_gamma_eta(gamma, eta, "single_rail_success");
  const double g2 = gamma * gamma;
  const double norm = (1.0 + g2) * (1.0 + g2);
  return 2.0 * g2 * eta * (1.0 + surviving_double_weight(gamma, eta, detector)) / norm;
}

PauliChannelTuple single_rail_channel(double gamma, double eta, Detector detector) {
  check_gamma_eta(gamma, eta, "single_rail_channel");
  const double x = surviving_double_weight(gamma, eta, detector);
  const double norm = 1.0 + x;
  return {1.0 / norm, 0.5 * x / norm, 0.5 * x / norm, 0.0};
}

Qbers concatenated_qbers(const RepeaterParams& params, const PauliChannelTuple& channel,
                         double exp_dephasing) {
  params.validate();
  channel.validate();
  const BellDiagonalState state =
      final_state({params.n, params.F0, params.mu0, params.mu, exp_dephasing});
  const double lz = std::pow(channel.bit_survival(), params.n);
  const double lx = std::pow(channel.phase_survival(), params.n);
  Qbers out;
  out.e_z = (1.0 - state.mu * lz) / 2.0;
  out.e_x = (1.0 - state.mu * (2.0 * state.F - 1.0) * lx) / 2.0;
  return out;
}

Qbers single_rail_qbers(const RepeaterParams& params, double gamma, Detector detector,
                        double exp_dephasing) {
  const double eta = single_rail_transmission(params);
  return concatenated_qbers(params, single_rail_channel(gamma, eta, detector), exp_dephasing);
}

double protocol_success(const ProtocolSpec& protocol, const RepeaterParams& params) {
  protocol.validate();
  params.validate();
  double single = 0.0;
  switch (protocol.variant) {
    case ProtocolSpec::Variant::DualRail:
      single = params.p_link * params.p_link * std::exp(-params.L0_km / k_attenuation_km);
      break;
    case ProtocolSpec::Variant::SingleRail:
      single = single_rail_success(protocol.gamma, single_rail_transmission(params),
                                   protocol.detector);
      break;
    case ProtocolSpec::Variant::TwinFieldHook:
      single = protocol.hook_success;
      break;
  }
  return multiplexed_success(single, params.M);
}

PauliChannelTuple protocol_channel(const ProtocolSpec& protocol, const RepeaterParams& params) {
  protocol.validate();
  params.validate();
  switch (protocol.variant) {
    case ProtocolSpec::Variant::SingleRail:
      return single_rail_channel(protocol.gamma, single_rail_transmission(params),
                                 protocol.detector);
    case ProtocolSpec::Variant::TwinFieldHook:
      return protocol.hook_channel;
    case ProtocolSpec::Variant::DualRail:
      break;
  }
  return {};
}

RateResult protocol_secret_key_rate(const SchemeSpec& scheme, const ProtocolSpec& protocol,
                                    const RepeaterParams& params) {
  scheme.validate();
  protocol.validate();
  params.validate();
  if (scheme.n != params.n) {
    throw std::invalid_argument("protocol_secret_key_rate: scheme and params disagree on n");
  }
  const double p = protocol_success(protocol, params);
  const double alpha_eff = params.dephasing_multiplicity * inverse_eff_coherence(params);
  const SchemeStatistics stats = scheme_statistics_at(scheme, p, alpha_eff);
  const PauliChannelTuple channel = protocol_channel(protocol, params);

  RateResult result;
  result.p = p;
  result.alpha = inverse_eff_coherence(params);
  result.tau_s = params.tau_s();
  result.mean_k = stats.mean_k;
  result.mean_d = stats.mean_d;
  result.exp_dephasing = stats.exp_dephasing;
  result.raw_rate = 1.0 / (params.M * stats.mean_k);
  const Qbers q = concatenated_qbers(params, channel, stats.exp_dephasing);
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

std::optional<double> optimize_gamma(const SchemeSpec& scheme, const ProtocolSpec& protocol,
                                     const RepeaterParams& params) {
  if (protocol.variant != ProtocolSpec::Variant::SingleRail) {
    throw std::invalid_argument("optimize_gamma: only the single-rail amplitude is tunable");
  }
  scheme.validate();
  params.validate();
  const auto rate_at = [&](double gamma) {
    ProtocolSpec probe = protocol;
    probe.gamma = gamma;
    return protocol_secret_key_rate(scheme, probe, params).skr_per_second;
  };

  constexpr int k_probes = 25;
  const double step = std::pow(k_gamma_hi / k_gamma_lo, 1.0 / (k_probes - 1));
  double best_gamma = k_gamma_lo;
  double best_rate = 0.0;
  for (int i = 0; i < k_probes; ++i) {
    const double gamma = k_gamma_lo * std::pow(step, i);
    const double rate = rate_at(gamma);
    if (rate > best_rate) {
      best_rate = rate;
      best_gamma = gamma;
    }
  }
  if (best_rate <= 0.0) return std::nullopt;

  // Refine inside the bracketing pair of scan intervals.
  double a = std::max(k_gamma_lo, best_gamma / step);
  double b = std::min(k_gamma_hi, best_gamma * step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = rate_at(x1);
  double f2 = rate_at(x2);
  while (b - a > 1e-3 * b) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = rate_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = rate_at(x1);
    }
  }
  return 0.5 * (a + b);
}

ProtocolComparison per_second_comparison(const std::vector<ProtocolSpec>& protocols,
                                         const std::vector<int>& segment_counts,
                                         const RepeaterParams& base, double L_km) {
  if (!(L_km > 0.0)) throw std::invalid_argument("per_second_comparison: L must be > 0");
  base.validate();
  ProtocolComparison table;
  table.L_km = L_km;
  table.plob_per_second = plob(L_km) * k_reference_clock_hz;
  for (const ProtocolSpec& protocol : protocols) {
    protocol.validate();
    for (int n : segment_counts) {
      if (n < 1 || n > 8) {
        throw std::invalid_argument("per_second_comparison: n must lie in 1..8");
      }
      ProtocolRateCell cell;
      cell.n = n;
      cell.protocol = protocol;
      if (n == 1) {
        cell.skr_per_second = table.plob_per_second;
      } else {
        RepeaterParams params = base;
        params.n = n;
        params.L0_km = L_km / n;
        SchemeSpec scheme;
        scheme.n = n;
        scheme.distribution = Distribution::Parallel;
        scheme.swapping = Swapping::Optimal;
        ProtocolSpec chosen = protocol;
        if (protocol.variant == ProtocolSpec::Variant::SingleRail) {
          cell.gamma_star = optimize_gamma(scheme, protocol, params);
          if (!cell.gamma_star) {
            table.cells.push_back(cell);
            continue;
          }
          chosen.gamma = *cell.gamma_star;
          cell.protocol = chosen;
        }
        cell.skr_per_second = protocol_secret_key_rate(scheme, chosen, params).skr_per_second;
      }
      table.cells.push_back(cell);
    }
  }
  return table;
}

}  // namespace rpgf

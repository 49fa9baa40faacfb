// Optical-encoding layer on top of the chain statistics: maps the choice of
// entanglement-generation protocol (two-photon dual-rail, single-photon
// single-rail with a weakly excited emitter, or a caller-supplied twin-field
// style hook) to a per-segment success probability plus an induced Pauli
// channel, and assembles the resulting secret-key rates.  Throughout,
// RepeaterParams::p_link is the single-photon coupling efficiency; the
// dual-rail encoding needs both photons to arrive and therefore squares it.

#pragma once

#include <optional>
#include <vector>

#include "repeaterpgf/quantum_state.hpp"
#include "repeaterpgf/rates.hpp"
#include "repeaterpgf/scheme.hpp"

namespace rpgf {

// Midpoint detector model for the single-rail scheme: photon-number
// resolving, or on/off detectors that also accept double clicks.
enum class Detector { PNRD, OnOff };

// Single-qubit Pauli channel as a probability tuple over (I, X, Y, Z).
struct PauliChannelTuple {
  double p_i = 1.0;
  double p_x = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;

  double sum() const { return p_i + p_x + p_y + p_z; }
  // Survival factor of the Z-basis (bit) correlator under one application.
  double bit_survival() const { return p_i + p_z - p_x - p_y; }
  // Survival factor of the X-basis (phase) correlator.
  double phase_survival() const { return p_i + p_x - p_y - p_z; }
  // Throws std::invalid_argument unless non-negative and normalized.
  void validate() const;
};

struct ProtocolSpec {
  enum class Variant { DualRail, SingleRail, TwinFieldHook };
  Variant variant = Variant::DualRail;

  // SingleRail: excitation amplitude of the emitted spin-photon state and
  // the detector model at the midpoint station.
  double gamma = 0.1;
  Detector detector = Detector::PNRD;

  // TwinFieldHook: the per-segment behaviour is supplied directly by the
  // caller; the coherent-state physics behind it is out of scope here.
  double hook_success = 1.0;
  PauliChannelTuple hook_channel;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

// Transmission seen by one photon travelling to the midpoint detector:
// p_link e^{-L0/(2 L_att)}.  Half the exponent of a full segment, which is
// what gives single-photon interference its loss-scaling edge.
double single_rail_transmission(const RepeaterParams& params);

// Success probability of one single-rail generation attempt with photon
// transmission eta.
double single_rail_success(double gamma, double eta, Detector detector);

// Pauli channel induced on the heralded memory pair by photon loss (the
// admixture of the doubly excited component that lost one photon).
PauliChannelTuple single_rail_channel(double gamma, double eta, Detector detector);

// Error rates after n elementary links each crossing `channel`, combined
// with the memory and initial-state imperfections of `params` and the
// averaged dephasing factor of the waiting-time distribution.
Qbers concatenated_qbers(const RepeaterParams& params, const PauliChannelTuple& channel,
                         double exp_dephasing);

// Single-rail error rates via the induced-channel route above.
Qbers single_rail_qbers(const RepeaterParams& params, double gamma, Detector detector,
                        double exp_dephasing);

// Per-attempt segment success probability under the protocol, including the
// M-fold multiplexing map.
double protocol_success(const ProtocolSpec& protocol, const RepeaterParams& params);

// Per-segment induced channel (the identity for dual-rail).
PauliChannelTuple protocol_channel(const ProtocolSpec& protocol, const RepeaterParams& params);

// Secret-key rate of the chain running `scheme` over the given optical
// encoding.  Coincides with secret_key_rate for the dual-rail protocol at
// p_link = 1 (the baseline regression identity).
RateResult protocol_secret_key_rate(const SchemeSpec& scheme, const ProtocolSpec& protocol,
                                    const RepeaterParams& params);

// Maximizes the per-second key rate over the excitation amplitude on
// (1e-4, 1]: log-spaced coarse scan plus golden-section refinement to a
// relative bracket width of 1e-3.  std::nullopt when the rate vanishes over
// the whole bracket; throws unless the protocol is single-rail.
std::optional<double> optimize_gamma(const SchemeSpec& scheme, const ProtocolSpec& protocol,
                                     const RepeaterParams& params);

// Source clock assumed for the point-to-point reference column.
inline constexpr double k_reference_clock_hz = 1e9;

struct ProtocolRateCell {
  int n = 0;
  ProtocolSpec protocol;             // gamma holds the optimized value
  std::optional<double> gamma_star;  // set when the amplitude was optimized
  double skr_per_second = 0.0;
};

struct ProtocolComparison {
  double L_km = 0.0;
  double plob_per_second = 0.0;  // repeaterless bound at the reference clock
  std::vector<ProtocolRateCell> cells;
};

// Optimal-ordering chains for every (protocol, n) pair at total distance L,
// with the segment length L/n.  The n = 1 entries carry the GHz-clocked
// point-to-point bound itself, the natural repeaterless reference.
ProtocolComparison per_second_comparison(const std::vector<ProtocolSpec>& protocols,
                                         const std::vector<int>& segment_counts,
                                         const RepeaterParams& base, double L_km);

}  // namespace rpgf

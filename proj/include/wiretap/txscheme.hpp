#pragma once

#include "wiretap/chanmodel.hpp"

namespace wiretap {

/// What Alice transmits: data beamformer t with power rho*P, plus interference
/// with covariance q_z carrying the remaining (1 - rho)*P (or less, see below).
struct TxScheme {
    CVector t;
    CMatrix q_z;
    double rho = 1.0;
    double power_p = 0.0;
    double target_sinr = 0.0;
    /// The target was out of reach; all power went to data and q_z = 0.
    bool outage = false;
};

enum class RxKind { matched, mmse, robust_fdd, robust_tdd };

struct RxBeamformer {
    CVector w;
    RxKind kind = RxKind::matched;
};

struct SinrReport {
    double sinr_b = 0.0;
    double sinr_e = 0.0;
    double secrecy_capacity = 0.0;
    bool outage = false;
    /// Bob's output powers for a unit-norm w_b; their ratio is sinr_b.
    double signal_b = 0.0;
    double interference_noise_b = 0.0;
    /// Same split for Eve (unit-norm w_e).
    double signal_e = 0.0;
    double interference_noise_e = 0.0;
};

/// Power split when Alice also knows Eve's channel.
enum class KnownEcsiPower {
    /// Smallest rho reaching the target; the rest of P is not transmitted.
    fixed_qos,
    /// All of P on the data beam.
    full_power,
};

/// Unknown-eavesdropper design: t = v_1, rho from the target, leftover power
/// spread uniformly over the other right singular vectors.
TxScheme design_artificial_noise(const ChannelSet& chan, const SvdPartition& svd,
                                 double target_sinr);

/// Known-eavesdropper design (no artificial noise): t maximizes
/// ||H_ba t||^2 / ||H_ea t||^2, restricted to null(H_ea) when it exists.
TxScheme design_known_ecsi(const ChannelSet& chan, const ChannelMatrix& h_ea_assumed,
                           double target_sinr,
                           KnownEcsiPower policy = KnownEcsiPower::fixed_qos);

/// Generalized eigenpairs of (A, B) with B positive definite, ascending.
struct GeneralizedEigen {
    RVector values;
    CMatrix vectors;
};
/// Solves H_ba^H H_ba t = lambda H_ea^H H_ea t.
GeneralizedEigen gev_bob_over_eve(const ChannelMatrix& h_ba, const ChannelMatrix& h_ea);
/// Solves H_ea^H H_ea t = lambda H_ba^H H_ba t.
GeneralizedEigen gev_eve_over_bob(const ChannelMatrix& h_ba, const ChannelMatrix& h_ea);

RxBeamformer bob_matched_beamformer(const ChannelSet& chan, const TxScheme& scheme);
RxBeamformer eve_mmse_beamformer(const ChannelSet& chan, const TxScheme& scheme);

/// Max-SINR receiver (Q_int^{-1} h) for an arbitrary positive definite Q_int.
CVector mmse_weights(const CMatrix& q_int, const CVector& h_t);

/// rho P |w^H h|^2 / (w^H (H Q H^H + sigma^2 I) w) for one receiver.
double output_sinr(const CMatrix& h, const CVector& t, double rho_p, const CMatrix& q_z,
                   double noise, const CVector& w);

/// Bob and Eve SINR for the transmission (scheme.t, scheme.rho) with actual
/// interference covariance q_z_true.
SinrReport evaluate_sinr(const ChannelSet& chan, const TxScheme& scheme, const RxBeamformer& w_b,
                         const RxBeamformer& w_e, const CMatrix& q_z_true);

/// Eve's MMSE output SINR in closed form, rho P t^H H^H (H Q H^H + s^2 I)^{-1} H t.
double eve_sinr_closed_form(const ChannelSet& chan, const TxScheme& scheme);

/// max(0, log2(1 + sinr_b) - log2(1 + sinr_e)), bits per channel use.
double secrecy_capacity_proxy(double sinr_b, double sinr_e);

/// Log-det secrecy rate of the data stream with the interference treated as
/// noise at both receivers, clamped at zero.
double secrecy_rate_logdet(const ChannelSet& chan, const TxScheme& scheme, const CMatrix& q_z_true);

/// Perfect-CSI pipeline: artificial-noise design, matched filter at Bob, MMSE at Eve.
SinrReport evaluate_perfect_csi(const ChannelSet& chan, const SvdPartition& svd,
                                double target_sinr);

} // namespace wiretap

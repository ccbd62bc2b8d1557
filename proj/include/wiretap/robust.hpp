#pragma once

#include "wiretap/perturb.hpp"

namespace wiretap {

enum class RobustMode { fdd, tdd };

/// How the data power fraction is settled when Alice's CSI is imperfect.
enum class RhoPolicy {
    /// Bob solves for the smallest rho that gives him the target SINR with his
    /// robust receiver and feeds it back; Alice transmits with it.
    requested,
    /// Alice keeps rho~ = sigma_b^2 S / (sigma~_1^2 P) from her own estimate.
    alice_estimate,
};

struct RobustOptions {
    RhoPolicy rho_policy = RhoPolicy::requested;
    /// FDD only: model the interference as H~ Q~ H~^H instead of H Q~ H^H.
    bool estimate_propagation = false;
};

/// What Bob knows when he builds his receiver.
struct RobustContext {
    RobustMode mode = RobustMode::fdd;
    /// Interference-plus-noise covariance Bob assumes (exact for FDD, expected for TDD).
    CMatrix q_int;
    /// Alice's data beamformer as Bob models it.
    CVector t_hat;
};

struct RobustOutcome {
    RxBeamformer w;
    SinrReport report;
    /// The transmission Alice actually made.
    TxScheme sent;
    RobustContext context;
    /// Bob's expected covariance was indefinite and got diagonally loaded.
    bool loaded = false;
};

/// Bob knows Alice's estimate h_tilde exactly (he fed it back).
RobustOutcome fdd_receiver(const ChannelSet& chan, const ChannelMatrix& h_tilde, double target_sinr,
                           const RobustOptions& opts = {});

/// Bob knows only the error statistics (through `moments`); err_sample drives
/// Alice's side of the simulation and is never used by Bob.
RobustOutcome tdd_receiver(const ChannelSet& chan, const SvdPartition& svd,
                           const PerturbMoments& moments, const ChannelMatrix& err_sample,
                           double target_sinr, const RobustOptions& opts = {});

/// Bob's expected interference structure for the TDD receiver:
/// H H^H - s1^2 u1 u1^H - s1 (u1 E{dv1}^H H^H + H E{dv1} u1^H), made exactly
/// Hermitian. The expected covariance is beta * this + sigma_b^2 I.
CMatrix tdd_interference_shape(const ChannelSet& chan, const SvdPartition& svd,
                               const PerturbMoments& moments);

} // namespace wiretap

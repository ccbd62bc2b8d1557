#pragma once

#include "wiretap/chanmodel.hpp"
#include "wiretap/txscheme.hpp"

namespace wiretap {

/// Second-order expected perturbations of the SVD of H_ba under a zero-mean
/// circularly-symmetric error dH with covariance C.
///
/// Singular-vector perturbations use the gauge v_j^H (v_j + dv_j) real and
/// positive, the same alignment the Monte Carlo oracle applies.
struct PerturbMoments {
    /// D = (Sigma_s^2 - sigma_F^2 I)^{-1}, diagonal, F-1 entries.
    RVector d;
    /// E{dH v_F v_F^H dH^H} (nb x nb); sigma_H^2 I for i.i.d. errors.
    CMatrix g;
    /// E{dH V_s D V_s^H dH^H} (nb x nb).
    CMatrix g_prime;
    /// E{dH^H U_s D U_s^H dH} (na x na).
    CMatrix g_dprime;
    /// E{dH V_s V_s^H dH^H} (nb x nb).
    CMatrix k;
    /// E{dV_s}, na x (F-1).
    CMatrix e_dv_s;
    /// E{V_s^H dV_s}, (F-1) x (F-1).
    CMatrix e_vs_dvs;
    /// E{dSigma_s}, F-1 entries.
    RVector e_dsigma_s;

    double e_dsigma1 = 0.0;
    /// E{(dsigma_1)^2}
    double e_dsigma1_sq = 0.0;
    CVector e_dv1;
    /// E{v_1^H dv_1}; real in this gauge, kept complex to expose any imaginary residue.
    cplx e_v1_dv1{0.0, 0.0};
};

/// Throws IllConditionedError for a flagged SVD and OrientationError when rows > cols.
PerturbMoments compute_moments(const SvdPartition& svd, const CsiErrorModel& err);

/// Numerator and denominator of the ratio-of-expectations naive SINR, both
/// scaled for a unit-norm Bob beamformer.
struct NaivePrediction {
    double signal = 0.0;
    double interference_noise = 0.0;
    double sinr() const { return signal / interference_noise; }
};

/// Throws ParameterError when the nominal design is in outage (unless
/// `outage_rule`, which then predicts the all-power, no-noise transmission) and
/// ValidityRangeError when either term is not positive.
NaivePrediction naive_prediction_terms(const SvdPartition& svd, const PerturbMoments& moments,
                                       const ChannelSet& chan, double target_sinr,
                                       bool outage_rule = false);

/// Expected Bob SINR of the naive scheme (ratio of expected powers).
double predict_naive_sinr(const SvdPartition& svd, const PerturbMoments& moments,
                          const ChannelSet& chan, double target_sinr);

/// One Monte Carlo draw of the naive scheme: Alice designs from H_ba + dH,
/// Bob keeps the matched filter H_ba v_1, Eve uses her MMSE receiver.
SinrReport simulate_naive(const ChannelSet& chan, const ChannelMatrix& err_sample,
                          double target_sinr);
SinrReport simulate_naive(const ChannelSet& chan, const SvdPartition& svd,
                          const ChannelMatrix& err_sample, double target_sinr);

/// The artificial-noise scheme Alice builds from her estimate h_tilde.
TxScheme design_from_estimate(const ChannelSet& chan, const ChannelMatrix& h_tilde,
                              double target_sinr);

/// Predictions for sigma_H above -10 dB are outside the accuracy region.
constexpr double kPredictionValidityDb = -10.0;

} // namespace wiretap

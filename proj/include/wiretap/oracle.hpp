#pragma once

// Brute-force reference estimators. These only sample, decompose and average;
// they never call the closed-form perturbation code they are used to check.

#include <cmath>
#include <cstdint>

#include "wiretap/chanmodel.hpp"

namespace wiretap::oracle {

struct MomentEstimate {
    double e_dsigma1 = 0.0;
    double e_dsigma1_sq = 0.0;
    CVector e_dv1;
    cplx e_v1_dv1{0.0, 0.0};
    CMatrix e_dv_s;
    CMatrix e_vs_dvs;
    RVector e_dsigma_s;
    /// Sample means of dH v_F v_F^H dH^H, dH V_s D V_s^H dH^H, dH V_s V_s^H dH^H
    /// and dH^H U_s D U_s^H dH (over twice as many independent draws as `draws`).
    CMatrix g;
    CMatrix g_prime;
    CMatrix k;
    CMatrix g_dprime;
    /// Monte Carlo standard errors of the scalar estimates (per rotation group).
    double se_dsigma1 = 0.0;
    double se_dsigma1_sq = 0.0;
    double se_v1_dv1 = 0.0;
    /// Number of perturbed decompositions averaged.
    int draws = 0;
};

/// Averages (sigma~_j - sigma_j) and phase-aligned (v~_j - v_j) over
/// perturbations of h. Each base draw dH is used with its rotations
/// i^k dH, k = 0..3, which have the same circular distribution; `draws`
/// counts all of them.
MomentEstimate monte_carlo_moments(const ChannelMatrix& h, const CsiErrorModel& err, int draws,
                                   std::uint64_t seed);

/// Sample mean and standard error of a stream of values.
class RunningMean {
  public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double standard_error() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    long count() const { return n_; }

  private:
    long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace wiretap::oracle

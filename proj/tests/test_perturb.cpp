#include <gtest/gtest.h>

#include <cmath>

#include "wiretap/oracle.hpp"
#include "wiretap/perturb.hpp"
#include "wiretap/random.hpp"
#include "wiretap/units.hpp"

using namespace wiretap;

TEST(Moments, ZeroCovarianceIsZero) {
    const SvdPartition svd = partition_svd(generate_channels(4, 3, 3, 1.0, 2).h_ba);
    const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(0.0));
    EXPECT_TRUE(m.g.isZero(0.0));
    EXPECT_TRUE(m.g_prime.isZero(0.0));
    EXPECT_TRUE(m.g_dprime.isZero(0.0));
    EXPECT_TRUE(m.k.isZero(0.0));
    EXPECT_TRUE(m.e_dv1.isZero(0.0));
    EXPECT_EQ(m.e_dsigma1, 0.0);
    EXPECT_EQ(m.e_dsigma1_sq, 0.0);
}

TEST(Moments, IidGIsScaledIdentity) {
    const SvdPartition svd = partition_svd(generate_channels(5, 5, 5, 1.0, 8).h_ba);
    const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(0.003));
    EXPECT_LT((m.g - 0.003 * CMatrix::Identity(5, 5)).norm(), 1e-15);
}

TEST(Moments, IidFullCovarianceAgree) {
    const SvdPartition svd = partition_svd(generate_channels(3, 2, 2, 1.0, 8).h_ba);
    const PerturbMoments a = compute_moments(svd, CsiErrorModel::iid(0.01));
    const PerturbMoments b = compute_moments(svd, CsiErrorModel::full(0.01 * CMatrix::Identity(6, 6)));
    EXPECT_LT((a.g_prime - b.g_prime).norm(), 1e-12);
    EXPECT_LT((a.e_dv1 - b.e_dv1).norm(), 1e-12);
    EXPECT_NEAR(a.e_dsigma1, b.e_dsigma1, 1e-12);
}

TEST(Moments, ScaleLinearlyWithVariance) {
    const SvdPartition svd = partition_svd(generate_channels(4, 4, 4, 1.0, 9).h_ba);
    const PerturbMoments a = compute_moments(svd, CsiErrorModel::iid(0.01));
    const PerturbMoments b = compute_moments(svd, CsiErrorModel::iid(0.02));
    EXPECT_NEAR(b.e_dsigma1, 2.0 * a.e_dsigma1, 1e-14);
    EXPECT_LT((b.k - 2.0 * a.k).norm(), 1e-13);
}

TEST(Moments, TallChannelIsOrientationError) {
    const SvdPartition svd = partition_svd(generate_channels(2, 4, 2, 1.0, 3).h_ba);
    EXPECT_THROW(compute_moments(svd, CsiErrorModel::iid(0.01)), OrientationError);
}

TEST(Moments, IllConditionedRefused) {
    const SvdPartition svd = partition_svd(ChannelMatrix(CMatrix::Identity(3, 3)));
    EXPECT_THROW(compute_moments(svd, CsiErrorModel::iid(0.01)), IllConditionedError);
}

TEST(Moments, WideChannelSigmaShiftMatchesMonteCarlo) {
    ComplexGaussian g(7);
    const ChannelMatrix h(g.matrix(2, 4));
    const CsiErrorModel err = CsiErrorModel::iid(0.0025);
    const PerturbMoments m = compute_moments(partition_svd(h), err);
    const oracle::MomentEstimate e = oracle::monte_carlo_moments(h, err, 100000, 5);
    const double d = std::abs(e.e_dsigma1 - m.e_dsigma1);
    EXPECT_TRUE(d <= 1e-4 || d <= 0.1 * std::abs(m.e_dsigma1)) << e.e_dsigma1 << " vs " << m.e_dsigma1;
    const double d2 = std::abs(e.e_dsigma1_sq - m.e_dsigma1_sq);
    EXPECT_TRUE(d2 <= 1e-4 || d2 <= 0.1 * m.e_dsigma1_sq);
}

TEST(Moments, GaugeKeepsV1ProjectionReal) {
    const SvdPartition svd = partition_svd(generate_channels(4, 4, 4, 1.0, 13).h_ba);
    const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(0.01));
    EXPECT_NEAR(m.e_v1_dv1.imag(), 0.0, 1e-14);
    EXPECT_LE(m.e_v1_dv1.real(), 0.0);
}

TEST(Prediction, ZeroMomentsReduceToTarget) {
    const ChannelSet c = generate_channels(5, 5, 5, 1.0, 4);
    const SvdPartition svd = partition_svd(c.h_ba);
    const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(0.0));
    EXPECT_NEAR(predict_naive_sinr(svd, m, c, 100.0), 100.0, 1e-12 * 100.0);
}

TEST(Prediction, IidErrorsDegrade) {
    for (int i = 0; i < 20; ++i) {
        const ChannelSet c = generate_channels(5, 5, 5, 1.0, derive_seed(77, i));
        const SvdPartition svd = partition_svd(c.h_ba);
        if (svd.ill_conditioned)
            continue;
        const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(from_db(-20.0)));
        try {
            EXPECT_LE(predict_naive_sinr(svd, m, c, 100.0), 100.0);
        } catch (const ParameterError&) {
        }
    }
}

TEST(Prediction, OutageNeedsRule) {
    const ChannelSet c = generate_channels(2, 2, 2, 1.0, 4);
    const SvdPartition svd = partition_svd(c.h_ba);
    const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(0.001));
    EXPECT_THROW(predict_naive_sinr(svd, m, c, 1e9), ParameterError);
    const NaivePrediction p = naive_prediction_terms(svd, m, c, 1e9, true);
    EXPECT_GT(p.sinr(), 0.0);
}

TEST(Prediction, InvalidTarget) {
    const ChannelSet c = generate_channels(2, 2, 2, 1.0, 4);
    const SvdPartition svd = partition_svd(c.h_ba);
    const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(0.001));
    EXPECT_THROW(predict_naive_sinr(svd, m, c, -1.0), ParameterError);
}

TEST(SimulateNaive, NoErrorHitsTarget) {
    const ChannelSet c = generate_channels(4, 4, 4, 1.0, 5);
    const ChannelMatrix zero(CMatrix::Zero(4, 4));
    EXPECT_NEAR(simulate_naive(c, zero, 100.0).sinr_b, 100.0, 1e-7);
}

TEST(SimulateNaive, PredictionTracksMonteCarlo) {
    // Pooled over channels, ratio of expected powers, as in the sweep harness.
    for (int n : {2, 5}) {
        double ps = 0, pi = 0, ms = 0, mi = 0;
        const double sigma_sq = from_db(-20.0);
        for (int i = 0; i < 400; ++i) {
            const ChannelSet c = generate_channels(n, n, n, 1.0, derive_seed(1000 + n, i));
            const SvdPartition svd = partition_svd(c.h_ba);
            if (svd.ill_conditioned)
                continue;
            const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(sigma_sq));
            NaivePrediction p;
            try {
                p = naive_prediction_terms(svd, m, c, 100.0, true);
            } catch (const ValidityRangeError&) {
                continue;
            }
            ps += p.signal;
            pi += p.interference_noise;
            for (int k = 0; k < 5; ++k) {
                const ChannelMatrix dh =
                    sample_csi_error(CsiErrorModel::iid(sigma_sq), n, n, derive_seed(2000 + i, k));
                const SinrReport r = simulate_naive(c, svd, dh, 100.0);
                ms += r.signal_b / 5;
                mi += r.interference_noise_b / 5;
            }
        }
        EXPECT_NEAR(to_db(ps / pi), to_db(ms / mi), 1.0) << "n=" << n;
    }
}

TEST(DesignFromEstimate, MatchesPerfectDesign) {
    const ChannelSet c = generate_channels(3, 3, 3, 1.0, 5);
    const TxScheme a = design_from_estimate(c, c.h_ba, 20.0);
    const TxScheme b = design_artificial_noise(c, partition_svd(c.h_ba), 20.0);
    EXPECT_NEAR(a.rho, b.rho, 1e-15);
    EXPECT_LT((a.q_z - b.q_z).norm(), 1e-12);
}

#include <gtest/gtest.h>

#include "wiretap/random.hpp"
#include "wiretap/robust.hpp"
#include "wiretap/units.hpp"

using namespace wiretap;

TEST(Fdd, ExactEstimateHitsTarget) {
    for (int i = 0; i < 20; ++i) {
        const ChannelSet c = generate_channels(4, 4, 4, 1.0, derive_seed(3, i));
        const RobustOutcome o = fdd_receiver(c, c.h_ba, 100.0);
        if (!o.report.outage)
            EXPECT_NEAR(o.report.sinr_b, 100.0, 1e-7);
    }
}

TEST(Fdd, RequestedRhoReachesTarget) {
    const ChannelSet c = generate_channels(5, 5, 5, 1.0, 6);
    const ChannelMatrix dh = sample_csi_error(CsiErrorModel::iid(from_db(-15.0)), 5, 5, 9);
    const ChannelMatrix est(c.h_ba.matrix() + dh.matrix());
    const RobustOutcome o = fdd_receiver(c, est, 100.0);
    ASSERT_FALSE(o.report.outage);
    EXPECT_NEAR(o.report.sinr_b, 100.0, 1e-6);
}

TEST(Fdd, AliceRhoFallsShort) {
    const ChannelSet c = generate_channels(5, 5, 5, 1.0, 6);
    const ChannelMatrix dh = sample_csi_error(CsiErrorModel::iid(from_db(-10.0)), 5, 5, 9);
    const ChannelMatrix est(c.h_ba.matrix() + dh.matrix());
    RobustOptions opts;
    opts.rho_policy = RhoPolicy::alice_estimate;
    const RobustOutcome a = fdd_receiver(c, est, 100.0, opts);
    const RobustOutcome r = fdd_receiver(c, est, 100.0);
    EXPECT_GE(r.report.sinr_b, a.report.sinr_b * (1 - 1e-9));
}

TEST(Fdd, StrictModelRuns) {
    const ChannelSet c = generate_channels(3, 3, 3, 1.0, 6);
    const ChannelMatrix dh = sample_csi_error(CsiErrorModel::iid(0.01), 3, 3, 2);
    RobustOptions opts;
    opts.estimate_propagation = true;
    const RobustOutcome o = fdd_receiver(c, ChannelMatrix(c.h_ba.matrix() + dh.matrix()), 50.0, opts);
    EXPECT_GT(o.report.sinr_b, 0.0);
}

TEST(Tdd, NoErrorHitsTarget) {
    const ChannelSet c = generate_channels(4, 4, 4, 1.0, 8);
    const SvdPartition svd = partition_svd(c.h_ba);
    const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(0.0));
    const RobustOutcome o = tdd_receiver(c, svd, m, ChannelMatrix(CMatrix::Zero(4, 4)), 100.0);
    EXPECT_NEAR(o.report.sinr_b, 100.0, 1e-7);
    EXPECT_FALSE(o.loaded);
}

TEST(Tdd, InterferenceShapeHermitian) {
    const ChannelSet c = generate_channels(4, 4, 4, 1.0, 8);
    const SvdPartition svd = partition_svd(c.h_ba);
    const PerturbMoments m = compute_moments(svd, CsiErrorModel::iid(0.01));
    const CMatrix s = tdd_interference_shape(c, svd, m);
    EXPECT_EQ(s, s.adjoint());
}

TEST(Tdd, ImprovesOnNaive) {
    double tdd = 0, naive = 0;
    const CsiErrorModel err = CsiErrorModel::iid(from_db(-10.0));
    for (int i = 0; i < 200; ++i) {
        const ChannelSet c = generate_channels(5, 5, 5, 1.0, derive_seed(44, i));
        const SvdPartition svd = partition_svd(c.h_ba);
        if (svd.ill_conditioned)
            continue;
        const PerturbMoments m = compute_moments(svd, err);
        const ChannelMatrix dh = sample_csi_error(err, 5, 5, derive_seed(45, i));
        tdd += tdd_receiver(c, svd, m, dh, 100.0).report.sinr_b;
        naive += simulate_naive(c, svd, dh, 100.0).sinr_b;
    }
    EXPECT_GT(tdd, 5.0 * naive);
}

#include <gtest/gtest.h>

#include <cmath>

#include "wiretap/chanmodel.hpp"
#include "wiretap/random.hpp"
#include "wiretap/units.hpp"

using namespace wiretap;

TEST(GenerateChannels, UnitAverageGain) {
    double sum = 0.0;
    long count = 0;
    for (std::uint64_t s = 0; s < 62500; ++s) {
        const ChannelSet c = generate_channels(4, 4, 4, 1.0, derive_seed(7, s));
        sum += c.h_ba.matrix().squaredNorm();
        count += 16;
    }
    EXPECT_GE(sum / count, 0.99);
    EXPECT_LE(sum / count, 1.01);
}

TEST(GenerateChannels, ScalarDimensions) {
    const ChannelSet c = generate_channels(1, 1, 1, 1.0, 0);
    EXPECT_EQ(c.h_ba.rows(), 1);
    EXPECT_EQ(c.h_ea.cols(), 1);
    EXPECT_NO_THROW(c.validate());
}

TEST(GenerateChannels, SameSeedSameMatrices) {
    const ChannelSet a = generate_channels(3, 2, 4, 0.5, 99);
    const ChannelSet b = generate_channels(3, 2, 4, 0.5, 99);
    EXPECT_EQ(a.h_ba.matrix(), b.h_ba.matrix());
    EXPECT_EQ(a.h_ea.matrix(), b.h_ea.matrix());
}

TEST(GenerateChannels, RejectsBadDimensions) {
    EXPECT_THROW(generate_channels(0, 2, 2, 1.0, 1), DimensionError);
    EXPECT_THROW(generate_channels(2, 2, -1, 1.0, 1), DimensionError);
}

TEST(ChannelMatrixTest, RejectsNonFinite) {
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = cplx(NAN, 0.0);
    EXPECT_THROW(ChannelMatrix{m}, Error);
}

TEST(PartitionSvd, Diagonal) {
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 0) = 2.0;
    h(1, 1) = 1.0;
    const SvdPartition s = partition_svd(ChannelMatrix(h));
    EXPECT_DOUBLE_EQ(s.sigma1(), 2.0);
    EXPECT_DOUBLE_EQ(s.sigma_f(), 1.0);
    EXPECT_NEAR(std::abs(s.v1()(0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(s.v_f()(1)), 1.0, 1e-15);
    EXPECT_FALSE(s.ill_conditioned);
}

TEST(PartitionSvd, UnitaryIsFlagged) {
    ComplexGaussian g(5);
    const Eigen::HouseholderQR<CMatrix> qr(g.matrix(3, 3));
    const CMatrix q = qr.householderQ();
    const SvdPartition s = partition_svd(ChannelMatrix(q));
    for (Eigen::Index i = 0; i < 3; ++i)
        EXPECT_NEAR(s.sigma(i), 1.0, 1e-12);
    EXPECT_TRUE(s.ill_conditioned);
}

TEST(PartitionSvd, WideReconstruction) {
    ComplexGaussian g(7);
    const ChannelMatrix h(g.matrix(2, 4));
    const SvdPartition s = partition_svd(h);
    EXPECT_LT((s.reconstruct() - h.matrix()).norm(), 1e-9);
    EXPECT_EQ(s.t_prime().cols(), 3);
    EXPECT_LT((s.v.adjoint() * s.v - CMatrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(PartitionSvd, RankDeficientThrows) {
    CMatrix h(2, 2);
    h << 1.0, 2.0, 2.0, 4.0;
    EXPECT_THROW(partition_svd(ChannelMatrix(h)), DegenerateChannelError);
}

TEST(PartitionSvd, PhaseConvention) {
    ComplexGaussian g(21);
    const SvdPartition s = partition_svd(ChannelMatrix(g.matrix(4, 4)));
    for (Eigen::Index j = 0; j < 4; ++j) {
        Eigen::Index k;
        s.v.col(j).cwiseAbs().maxCoeff(&k);
        EXPECT_NEAR(s.v(k, j).imag(), 0.0, 1e-14);
        EXPECT_GT(s.v(k, j).real(), 0.0);
    }
}

TEST(AlignPhase, MakesInnerProductReal) {
    ComplexGaussian g(3);
    const CVector ref = g.vector(4);
    const CVector c = g.vector(4);
    const cplx ip = ref.dot(align_phase(c, ref));
    EXPECT_NEAR(ip.imag(), 0.0, 1e-14);
    EXPECT_GE(ip.real(), 0.0);
}

TEST(CsiError, ZeroModelGivesZero) {
    EXPECT_TRUE(sample_csi_error(CsiErrorModel::iid(0.0), 3, 3, 4).matrix().isZero(0.0));
}

TEST(CsiError, IidVariance) {
    const CsiErrorModel m = CsiErrorModel::iid(0.01);
    double sum = 0.0;
    const int draws = 100000;
    for (int n = 0; n < draws; ++n)
        sum += std::norm(sample_csi_error(m, 1, 1, derive_seed(11, n)).matrix()(0, 0));
    EXPECT_GE(sum / draws, 0.0097);
    EXPECT_LE(sum / draws, 0.0103);
}

TEST(CsiError, FullCovarianceMatchesIid) {
    const CsiErrorModel m = CsiErrorModel::full(0.01 * CMatrix::Identity(4, 4));
    CMatrix acc = CMatrix::Zero(4, 4);
    const int draws = 100000;
    for (int n = 0; n < draws; ++n) {
        const CMatrix d = sample_csi_error(m, 2, 2, derive_seed(12, n)).matrix();
        const CVector v = Eigen::Map<const CVector>(d.data(), 4);
        acc += v * v.adjoint();
    }
    acc /= draws;
    const CMatrix ref = 0.01 * CMatrix::Identity(4, 4);
    EXPECT_LT((acc - ref).norm() / ref.norm(), 0.05);
}

TEST(CsiError, DimensionMismatch) {
    const CsiErrorModel m = CsiErrorModel::full(CMatrix::Identity(4, 4));
    EXPECT_THROW(sample_csi_error(m, 3, 2, 1), DimensionError);
}

TEST(CsiError, RejectsIndefiniteCovariance) {
    CMatrix c = CMatrix::Identity(2, 2);
    c(1, 1) = -1.0;
    EXPECT_THROW(CsiErrorModel::full(c), ParameterError);
    EXPECT_THROW(CsiErrorModel::iid(-1.0), ParameterError);
}

TEST(PerturbEcsi, ZeroBlendIsIdentity) {
    ComplexGaussian g(8);
    const ChannelMatrix h(g.matrix(2, 3));
    EXPECT_EQ(perturb_ecsi(h, 0.0, 1).matrix(), h.matrix());
}

TEST(PerturbEcsi, FullBlendIsIndependent) {
    const ChannelMatrix h(CMatrix::Constant(1, 1, cplx(1.0, 0.0)));
    double corr = 0.0;
    const int draws = 20000;
    for (int n = 0; n < draws; ++n)
        corr += perturb_ecsi(h, 1.0, derive_seed(2, n)).matrix()(0, 0).real();
    EXPECT_NEAR(corr / draws, 0.0, 0.02);
}

TEST(PerturbEcsi, RejectsGammaOutsideUnitInterval) {
    const ChannelMatrix h(CMatrix::Identity(2, 2));
    EXPECT_THROW(perturb_ecsi(h, -0.1, 1), ParameterError);
    EXPECT_THROW(perturb_ecsi(h, 1.5, 1), ParameterError);
}

TEST(PerturbEcsi, FivePercentBlendLevel) {
    EXPECT_NEAR(to_db(0.05 / 0.95), -12.8, 0.05);
}

TEST(Units, DbRoundTrip) {
    for (double x : {1e-6, 0.3, 1.0, 7.5, 1e9})
        EXPECT_NEAR(from_db(to_db(x)) / x, 1.0, 1e-14);
    EXPECT_DOUBLE_EQ(to_db(100.0), 20.0);
}

TEST(Seeds, DerivedSeedsDiffer) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_NE(stream_seed(5, Stream::channel), stream_seed(5, Stream::csi_error));
}

#include "wiretap/oracle.hpp"

#include "wiretap/random.hpp"

namespace wiretap::oracle {

MomentEstimate monte_carlo_moments(const ChannelMatrix& h, const CsiErrorModel& err, int draws,
                                   std::uint64_t seed) {
    const SvdPartition base = partition_svd(h);
    const Eigen::Index na = h.cols();
    const Eigen::Index nb = h.rows();
    const Eigen::Index f = base.rank();
    const Eigen::Index fs = f - 1;

    RVector dinv(fs);
    for (Eigen::Index j = 0; j < fs; ++j)
        dinv(j) = 1.0 / (base.sigma(j) * base.sigma(j) - base.sigma(f - 1) * base.sigma(f - 1));
    const CVector vf = base.v.col(f - 1);
    const CMatrix vs = base.v.leftCols(fs);
    const CMatrix us = base.u.leftCols(fs);
    const CMatrix x_g = vf * vf.adjoint();
    const CMatrix x_gp = vs * dinv.cast<cplx>().asDiagonal() * vs.adjoint();
    const CMatrix x_k = vs * vs.adjoint();
    const CMatrix y_gpp = us * dinv.cast<cplx>().asDiagonal() * us.adjoint();

    RunningMean dsigma, dsigma_sq, v_dv;
    CVector sum_dv1 = CVector::Zero(na);
    CMatrix sum_dv_s = CMatrix::Zero(na, fs);
    RVector sum_dsigma_s = RVector::Zero(fs);
    CMatrix sum_g = CMatrix::Zero(nb, nb), sum_gp = CMatrix::Zero(nb, nb),
            sum_k = CMatrix::Zero(nb, nb), sum_gpp = CMatrix::Zero(na, na);

    const cplx rotations[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    const int groups = (draws + 3) / 4;
    for (int n = 0; n < groups; ++n) {
        const CMatrix dh0 = sample_csi_error(err, static_cast<int>(nb), static_cast<int>(na),
                                             derive_seed(seed, static_cast<std::uint64_t>(n)))
                                .matrix();
        double g_ds = 0.0, g_ds2 = 0.0, g_vdv = 0.0;
        for (const cplx& r : rotations) {
            const SvdPartition pert = partition_svd(ChannelMatrix(h.matrix() + r * dh0));
            const double ds = pert.sigma(0) - base.sigma(0);
            g_ds += ds;
            g_ds2 += ds * ds;
            const CVector dv1 = align_phase(pert.v.col(0), base.v.col(0)) - base.v.col(0);
            g_vdv += base.v.col(0).dot(dv1).real();
            sum_dv1 += dv1;
            for (Eigen::Index j = 0; j < fs; ++j) {
                sum_dv_s.col(j) += align_phase(pert.v.col(j), base.v.col(j)) - base.v.col(j);
                sum_dsigma_s(j) += pert.sigma(j) - base.sigma(j);
            }
        }
        dsigma.add(g_ds / 4.0);
        dsigma_sq.add(g_ds2 / 4.0);
        v_dv.add(g_vdv / 4.0);
    }

    // The quadratic forms need no decomposition, so they get many more draws.
    const int quad_draws = 8 * groups;
    const std::uint64_t quad_seed = mix_seed(seed ^ 0x5157414452415449ULL);
    for (int n = 0; n < quad_draws; ++n) {
        const CMatrix dh = sample_csi_error(err, static_cast<int>(nb), static_cast<int>(na),
                                            derive_seed(quad_seed, static_cast<std::uint64_t>(n)))
                               .matrix();
        sum_g += dh * x_g * dh.adjoint();
        sum_gp += dh * x_gp * dh.adjoint();
        sum_k += dh * x_k * dh.adjoint();
        sum_gpp += dh.adjoint() * y_gpp * dh;
    }

    const double total = 4.0 * groups;
    MomentEstimate est;
    est.draws = 4 * groups;
    est.e_dsigma1 = dsigma.mean();
    est.se_dsigma1 = dsigma.standard_error();
    est.e_dsigma1_sq = dsigma_sq.mean();
    est.se_dsigma1_sq = dsigma_sq.standard_error();
    est.e_v1_dv1 = cplx(v_dv.mean(), 0.0);
    est.se_v1_dv1 = v_dv.standard_error();
    est.e_dv1 = sum_dv1 / total;
    est.e_dv_s = sum_dv_s / total;
    est.e_dsigma_s = sum_dsigma_s / total;
    est.e_vs_dvs = vs.adjoint() * est.e_dv_s;
    est.g = sum_g / static_cast<double>(quad_draws);
    est.g_prime = sum_gp / static_cast<double>(quad_draws);
    est.k = sum_k / static_cast<double>(quad_draws);
    est.g_dprime = sum_gpp / static_cast<double>(quad_draws);
    return est;
}

} // namespace wiretap::oracle

#include "wiretap/txscheme.hpp"

#include <algorithm>
#include <cmath>

namespace wiretap {

namespace {

double hermitian_logdet(const CMatrix& m) {
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw NumericError("log-det of a matrix that is not positive definite");
    const auto diag = llt.matrixLLT().diagonal().real();
    return 2.0 * diag.array().log().sum();
}

CVector normalize_phase(CVector t) {
    t.normalize();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < t.size(); ++i)
        if (std::abs(t(i)) > std::abs(t(best)))
            best = i;
    const double mag = std::abs(t(best));
    if (mag > 0.0)
        t *= std::conj(t(best) / mag);
    return t;
}

GeneralizedEigen solve_gev(const CMatrix& a, const CMatrix& b) {
    Eigen::LLT<CMatrix> llt(b);
    Eigen::SelfAdjointEigenSolver<CMatrix> check(b, Eigen::EigenvaluesOnly);
    const RVector& ev = check.eigenvalues();
    if (llt.info() != Eigen::Success || ev(0) <= 1e-12 * std::max(ev(ev.size() - 1), 1e-300))
        throw DegenerateChannelError("generalized eigenproblem has a singular right-hand matrix");
    Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> gev(a, b);
    if (gev.info() != Eigen::Success)
        throw NumericError("generalized eigensolver did not converge");
    return {gev.eigenvalues(), gev.eigenvectors()};
}

} // namespace

TxScheme design_artificial_noise(const ChannelSet& chan, const SvdPartition& svd,
                                 double target_sinr) {
    if (!(target_sinr > 0.0))
        throw ParameterError("target SINR must be positive");
    if (svd.rows() != chan.nb() || svd.cols() != chan.na())
        throw DimensionError("SVD does not belong to this channel");

    const Eigen::Index na = chan.na();
    const double s1 = svd.sigma1();
    TxScheme out;
    out.t = svd.v1();
    out.power_p = chan.power_p;
    out.target_sinr = target_sinr;
    out.rho = chan.sigma_b_sq * target_sinr / (s1 * s1 * chan.power_p);
    out.q_z = CMatrix::Zero(na, na);

    if (out.rho >= 1.0) {
        out.rho = 1.0;
        out.outage = true;
        return out;
    }
    if (na > 1) {
        const double beta = (1.0 - out.rho) * chan.power_p / static_cast<double>(na - 1);
        const auto tp = svd.t_prime();
        out.q_z = beta * tp * tp.adjoint();
    }
    return out;
}

GeneralizedEigen gev_bob_over_eve(const ChannelMatrix& h_ba, const ChannelMatrix& h_ea) {
    const CMatrix a = h_ba.matrix().adjoint() * h_ba.matrix();
    const CMatrix b = h_ea.matrix().adjoint() * h_ea.matrix();
    return solve_gev(a, b);
}

GeneralizedEigen gev_eve_over_bob(const ChannelMatrix& h_ba, const ChannelMatrix& h_ea) {
    const CMatrix a = h_ea.matrix().adjoint() * h_ea.matrix();
    const CMatrix b = h_ba.matrix().adjoint() * h_ba.matrix();
    return solve_gev(a, b);
}

TxScheme design_known_ecsi(const ChannelSet& chan, const ChannelMatrix& h_ea_assumed,
                           double target_sinr, KnownEcsiPower policy) {
    if (!(target_sinr > 0.0))
        throw ParameterError("target SINR must be positive");
    if (h_ea_assumed.cols() != chan.na())
        throw DimensionError("assumed eavesdropper channel has the wrong transmit dimension");

    const Eigen::Index na = chan.na();
    const CMatrix& h = chan.h_ba.matrix();

    Eigen::JacobiSVD<CMatrix> eve_svd(h_ea_assumed.matrix(), Eigen::ComputeFullV);
    const RVector& se = eve_svd.singularValues();
    Eigen::Index eve_rank = 0;
    const double tol = 1e-10 * std::max(se.size() ? se(0) : 0.0, 1e-300);
    for (Eigen::Index i = 0; i < se.size(); ++i)
        if (se(i) > tol)
            ++eve_rank;

    CVector t;
    if (eve_rank < na) {
        // Eve has a null space: the largest generalized eigenvalue is infinite and
        // any vector there silences her. Pick the one Bob hears best.
        const CMatrix z = eve_svd.matrixV().rightCols(na - eve_rank);
        Eigen::JacobiSVD<CMatrix> restricted(h * z, Eigen::ComputeFullV);
        if (restricted.singularValues()(0) <= 1e-12 * std::max(h.norm(), 1e-300))
            throw DegenerateChannelError("eavesdropper null space is invisible to Bob");
        t = z * restricted.matrixV().col(0);
    } else {
        const GeneralizedEigen gev = gev_bob_over_eve(chan.h_ba, h_ea_assumed);
        t = gev.vectors.col(gev.vectors.cols() - 1);
    }
    t = normalize_phase(std::move(t));

    TxScheme out;
    out.t = t;
    out.power_p = chan.power_p;
    out.target_sinr = target_sinr;
    out.q_z = CMatrix::Zero(na, na);
    const double gain = (h * t).squaredNorm();
    const double needed = chan.sigma_b_sq * target_sinr / (gain * chan.power_p);
    if (policy == KnownEcsiPower::full_power) {
        out.rho = 1.0;
        out.outage = needed > 1.0;
    } else if (needed > 1.0) {
        out.rho = 1.0;
        out.outage = true;
    } else {
        out.rho = needed;
    }
    return out;
}

RxBeamformer bob_matched_beamformer(const ChannelSet& chan, const TxScheme& scheme) {
    return {chan.h_ba.matrix() * scheme.t, RxKind::matched};
}

CVector mmse_weights(const CMatrix& q_int, const CVector& h_t) {
    Eigen::LLT<CMatrix> llt(q_int);
    if (llt.info() != Eigen::Success)
        throw NumericError("interference-plus-noise covariance is not positive definite");
    return llt.solve(h_t);
}

RxBeamformer eve_mmse_beamformer(const ChannelSet& chan, const TxScheme& scheme) {
    const CMatrix& he = chan.h_ea.matrix();
    const CMatrix q_int =
        he * scheme.q_z * he.adjoint() + chan.sigma_e_sq * CMatrix::Identity(he.rows(), he.rows());
    return {mmse_weights(q_int, he * scheme.t), RxKind::mmse};
}

double output_sinr(const CMatrix& h, const CVector& t, double rho_p, const CMatrix& q_z,
                   double noise, const CVector& w) {
    const CVector hw = h.adjoint() * w;
    const double signal = rho_p * std::norm(hw.dot(t));
    const double interference = hw.dot(q_z * hw).real() + noise * w.squaredNorm();
    if (!(interference > 0.0))
        throw NumericError("zero interference-plus-noise power");
    return signal / interference;
}

SinrReport evaluate_sinr(const ChannelSet& chan, const TxScheme& scheme, const RxBeamformer& w_b,
                         const RxBeamformer& w_e, const CMatrix& q_z_true) {
    const double rho_p = scheme.rho * chan.power_p;
    SinrReport r;
    r.outage = scheme.outage;

    const CMatrix& hb = chan.h_ba.matrix();
    const double wb_norm = w_b.w.squaredNorm();
    if (!(wb_norm > 0.0))
        throw NumericError("Bob's beamformer is zero");
    const CVector hw = hb.adjoint() * w_b.w;
    r.signal_b = rho_p * std::norm(hw.dot(scheme.t)) / wb_norm;
    r.interference_noise_b = hw.dot(q_z_true * hw).real() / wb_norm + chan.sigma_b_sq;
    r.sinr_b = r.signal_b / r.interference_noise_b;

    const CMatrix& he = chan.h_ea.matrix();
    const double we_norm = w_e.w.squaredNorm();
    if (!std::isfinite(we_norm))
        throw NumericError("Eve's beamformer is not finite");
    if (we_norm > 0.0) {
        const CVector hwe = he.adjoint() * w_e.w;
        r.signal_e = rho_p * std::norm(hwe.dot(scheme.t)) / we_norm;
        r.interference_noise_e = hwe.dot(q_z_true * hwe).real() / we_norm + chan.sigma_e_sq;
    } else {
        // H_ea t = 0 exactly: Eve receives no data signal in any direction.
        r.signal_e = 0.0;
        r.interference_noise_e = chan.sigma_e_sq;
    }
    r.sinr_e = r.signal_e / r.interference_noise_e;
    if (!std::isfinite(r.sinr_b) || !std::isfinite(r.sinr_e))
        throw NumericError("non-finite SINR");
    r.secrecy_capacity = secrecy_capacity_proxy(r.sinr_b, r.sinr_e);
    return r;
}

double eve_sinr_closed_form(const ChannelSet& chan, const TxScheme& scheme) {
    const CMatrix& he = chan.h_ea.matrix();
    const CMatrix q_int =
        he * scheme.q_z * he.adjoint() + chan.sigma_e_sq * CMatrix::Identity(he.rows(), he.rows());
    const CVector ht = he * scheme.t;
    return scheme.rho * chan.power_p * ht.dot(q_int.llt().solve(ht)).real();
}

double secrecy_capacity_proxy(double sinr_b, double sinr_e) {
    return std::max(0.0, std::log2(1.0 + sinr_b) - std::log2(1.0 + sinr_e));
}

double secrecy_rate_logdet(const ChannelSet& chan, const TxScheme& scheme, const CMatrix& q_z_true) {
    const CMatrix q_data = scheme.rho * chan.power_p * scheme.t * scheme.t.adjoint();
    auto rate = [&](const CMatrix& h, double noise) {
        const CMatrix eye = noise * CMatrix::Identity(h.rows(), h.rows());
        const CMatrix hq = h * q_z_true * h.adjoint();
        return (hermitian_logdet(eye + hq + h * q_data * h.adjoint()) - hermitian_logdet(eye + hq)) /
               std::log(2.0);
    };
    return std::max(0.0, rate(chan.h_ba.matrix(), chan.sigma_b_sq) -
                             rate(chan.h_ea.matrix(), chan.sigma_e_sq));
}

SinrReport evaluate_perfect_csi(const ChannelSet& chan, const SvdPartition& svd,
                                double target_sinr) {
    const TxScheme scheme = design_artificial_noise(chan, svd, target_sinr);
    return evaluate_sinr(chan, scheme, bob_matched_beamformer(chan, scheme),
                         eve_mmse_beamformer(chan, scheme), scheme.q_z);
}

} // namespace wiretap

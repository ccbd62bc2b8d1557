#include "wiretap/robust.hpp"

#include <cmath>
#include <optional>

namespace wiretap {

namespace {

double beta_of(double rho, const ChannelSet& chan) {
    const Eigen::Index na = chan.na();
    return na > 1 ? (1.0 - rho) * chan.power_p / static_cast<double>(na - 1) : 0.0;
}

// Bob's model of his interference-plus-noise covariance as a function of rho:
// beta(rho) * shape + sigma_b^2 I, kept in the eigenbasis of `shape` so that
// the output SINR rho P h^H Q^{-1} h is cheap to evaluate during the rho search.
class InterferenceModel {
  public:
    InterferenceModel(const CMatrix& shape, const CVector& h, const ChannelSet& chan)
        : chan_(chan) {
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(shape);
        mu_ = eig.eigenvalues();
        basis_ = eig.eigenvectors();
        proj_ = (basis_.adjoint() * h).cwiseAbs2();
    }

    RVector eigenvalues(double rho, bool* loaded = nullptr) const {
        const double beta = beta_of(rho, chan_);
        RVector lam = (beta * mu_).array() + chan_.sigma_b_sq;
        if (lam.minCoeff() <= 0.0) {
            const double load = 1e-8 * lam.cwiseAbs().sum() / static_cast<double>(lam.size());
            lam = lam.cwiseMax(load);
            if (loaded)
                *loaded = true;
        }
        return lam;
    }

    double sinr(double rho) const {
        const RVector lam = eigenvalues(rho);
        return rho * chan_.power_p * (proj_.array() / lam.array()).sum();
    }

    CMatrix covariance(double rho, bool* loaded) const {
        const RVector lam = eigenvalues(rho, loaded);
        return basis_ * lam.cast<cplx>().asDiagonal() * basis_.adjoint();
    }

    /// Smallest rho with sinr(rho) >= target, or nothing if even rho = 1 falls short.
    std::optional<double> solve(double target) const {
        if (sinr(1.0) < target)
            return std::nullopt;
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (sinr(mid) >= target ? hi : lo) = mid;
        }
        return hi;
    }

  private:
    const ChannelSet& chan_;
    RVector mu_;
    CMatrix basis_;
    RVector proj_;
};

// Alice's transmission with data beam t, interference directions t_prime and
// power fraction rho (or the all-data fallback when outage).
TxScheme make_transmission(const ChannelSet& chan, const CVector& t, const CMatrix& t_prime,
                           double rho, bool outage, double target_sinr) {
    TxScheme s;
    s.t = t;
    s.power_p = chan.power_p;
    s.target_sinr = target_sinr;
    s.outage = outage;
    s.rho = outage ? 1.0 : rho;
    s.q_z = CMatrix::Zero(chan.na(), chan.na());
    if (!outage && t_prime.cols() > 0)
        s.q_z = beta_of(s.rho, chan) * t_prime * t_prime.adjoint();
    return s;
}

double alice_rho(const ChannelSet& chan, double sigma1_est, double target_sinr) {
    return chan.sigma_b_sq * target_sinr / (sigma1_est * sigma1_est * chan.power_p);
}

} // namespace

RobustOutcome fdd_receiver(const ChannelSet& chan, const ChannelMatrix& h_tilde, double target_sinr,
                           const RobustOptions& opts) {
    if (!(target_sinr > 0.0))
        throw ParameterError("target SINR must be positive");
    if (h_tilde.rows() != chan.nb() || h_tilde.cols() != chan.na())
        throw DimensionError("channel estimate does not match Bob's channel");

    const SvdPartition est = partition_svd(h_tilde);
    const CMatrix& h = chan.h_ba.matrix();
    const CVector t = est.v1();
    const CMatrix tp = est.t_prime();
    const CMatrix& h_prop = opts.estimate_propagation ? h_tilde.matrix() : h;
    const CMatrix shape = h_prop * tp * tp.adjoint() * h_prop.adjoint();
    const CVector a = h * t;
    const InterferenceModel model(0.5 * (shape + shape.adjoint()), a, chan);

    double rho = 1.0;
    bool outage = false;
    if (opts.rho_policy == RhoPolicy::requested) {
        const auto solved = model.solve(target_sinr);
        outage = !solved;
        rho = solved.value_or(1.0);
    } else {
        rho = alice_rho(chan, est.sigma1(), target_sinr);
        outage = rho >= 1.0;
    }

    RobustOutcome out;
    out.sent = make_transmission(chan, t, tp, rho, outage, target_sinr);
    out.context.mode = RobustMode::fdd;
    out.context.t_hat = t;
    out.context.q_int = outage ? CMatrix(chan.sigma_b_sq * CMatrix::Identity(chan.nb(), chan.nb()))
                               : model.covariance(out.sent.rho, &out.loaded);
    out.w = {mmse_weights(out.context.q_int, a), RxKind::robust_fdd};
    out.report = evaluate_sinr(chan, out.sent, out.w, eve_mmse_beamformer(chan, out.sent),
                               out.sent.q_z);
    return out;
}

CMatrix tdd_interference_shape(const ChannelSet& chan, const SvdPartition& svd,
                               const PerturbMoments& moments) {
    const CMatrix& h = chan.h_ba.matrix();
    const double s1 = svd.sigma1();
    const CVector u1 = svd.u1();
    const CVector h_dv = h * moments.e_dv1;
    CMatrix shape = h * h.adjoint() - s1 * s1 * u1 * u1.adjoint() -
                    s1 * (u1 * h_dv.adjoint() + h_dv * u1.adjoint());
    return 0.5 * (shape + shape.adjoint());
}

RobustOutcome tdd_receiver(const ChannelSet& chan, const SvdPartition& svd,
                           const PerturbMoments& moments, const ChannelMatrix& err_sample,
                           double target_sinr, const RobustOptions& opts) {
    if (!(target_sinr > 0.0))
        throw ParameterError("target SINR must be positive");
    if (err_sample.rows() != chan.nb() || err_sample.cols() != chan.na())
        throw DimensionError("CSI error sample does not match Bob's channel");

    // Alice's side
    const ChannelMatrix h_tilde(chan.h_ba.matrix() + err_sample.matrix());
    const SvdPartition est = partition_svd(h_tilde);

    // Bob's side: only H_ba and the error statistics
    const CVector t_hat = svd.v1() + moments.e_dv1;
    const CVector a_hat = chan.h_ba.matrix() * t_hat;
    const InterferenceModel model(tdd_interference_shape(chan, svd, moments), a_hat, chan);

    double rho = 1.0;
    bool outage = false;
    if (opts.rho_policy == RhoPolicy::requested) {
        const auto solved = model.solve(target_sinr);
        outage = !solved;
        rho = solved.value_or(1.0);
    } else {
        rho = alice_rho(chan, est.sigma1(), target_sinr);
        outage = rho >= 1.0;
    }

    RobustOutcome out;
    out.sent = make_transmission(chan, est.v1(), est.t_prime(), rho, outage, target_sinr);
    out.context.mode = RobustMode::tdd;
    out.context.t_hat = t_hat;
    out.context.q_int = outage ? CMatrix(chan.sigma_b_sq * CMatrix::Identity(chan.nb(), chan.nb()))
                               : model.covariance(out.sent.rho, &out.loaded);
    out.w = {mmse_weights(out.context.q_int, a_hat), RxKind::robust_tdd};
    out.report = evaluate_sinr(chan, out.sent, out.w, eve_mmse_beamformer(chan, out.sent),
                               out.sent.q_z);
    return out;
}

} // namespace wiretap

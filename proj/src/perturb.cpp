#include "wiretap/perturb.hpp"

#include <cmath>

namespace wiretap {

namespace {

// Second moments of the rotated error E' = U^H dH V in the full SVD bases:
// at(a, b, c, d) = E{ E'(a,b) conj(E'(c,d)) }. Circular symmetry makes every
// E{E' E'} pseudo-moment vanish, so these are the only second-order terms.
class BasisCovariance {
  public:
    BasisCovariance(const SvdPartition& svd, const CsiErrorModel& err)
        : nb_(svd.rows()), iid_(err.is_iid()), s2_(err.sigma_h_sq()) {
        if (iid_)
            return;
        const Eigen::Index na = svd.cols();
        const Eigen::Index n = nb_ * na;
        CMatrix t(n, n);
        for (Eigen::Index b = 0; b < na; ++b)
            for (Eigen::Index a = 0; a < nb_; ++a)
                for (Eigen::Index i = 0; i < na; ++i)
                    for (Eigen::Index r = 0; r < nb_; ++r)
                        t(a + b * nb_, r + i * nb_) = svd.v(i, b) * std::conj(svd.u(r, a));
        rotated_ = t * err.dense(nb_, na) * t.adjoint();
    }

    cplx at(Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) const {
        if (iid_)
            return (a == c && b == d) ? cplx(s2_, 0.0) : cplx(0.0, 0.0);
        return rotated_(a + b * nb_, c + d * nb_);
    }

    double power(Eigen::Index a, Eigen::Index b) const { return at(a, b, a, b).real(); }

  private:
    Eigen::Index nb_;
    bool iid_;
    double s2_;
    CMatrix rotated_;
};

struct VectorMoment {
    CVector e_dv;
    cplx e_v_dv;
    double e_dsigma = 0.0;
    double e_dsigma_sq = 0.0;
};

// Rayleigh-Schroedinger expansion of the j-th eigenpair of (H + dH)^H (H + dH)
// to second order, averaged over dH.
VectorMoment vector_moment(const SvdPartition& svd, const BasisCovariance& m, Eigen::Index j) {
    const Eigen::Index nb = svd.rows();
    const Eigen::Index na = svd.cols();
    const Eigen::Index f = svd.rank();
    const double sj = svd.sigma(j);
    auto s = [&](Eigen::Index k) { return k < f ? svd.sigma(k) : 0.0; };
    auto gap = [&](Eigen::Index k) { return sj * sj - s(k) * s(k); };

    VectorMoment out;
    // first-order coefficient variances E|c_k|^2
    double coeff_power = 0.0;
    double sigma_second = 0.0;
    for (Eigen::Index k = 0; k < na; ++k) {
        if (k == j)
            continue;
        const double sk = s(k);
        const double num = sk * sk * (sk != 0.0 ? m.power(k, j) : 0.0) + sj * sj * m.power(j, k);
        coeff_power += num / (gap(k) * gap(k));
        sigma_second += num / gap(k);
    }
    double column_power = 0.0;
    for (Eigen::Index i = 0; i < nb; ++i)
        column_power += m.power(i, j);

    out.e_dsigma_sq = 0.5 * m.power(j, j);
    out.e_dsigma = (column_power - 0.5 * m.power(j, j) + sigma_second) / (2.0 * sj);
    out.e_v_dv = cplx(-0.5 * coeff_power, 0.0);

    out.e_dv = out.e_v_dv * svd.v.col(j);
    for (Eigen::Index k = 0; k < na; ++k) {
        if (k == j)
            continue;
        const double sk = s(k);
        cplx acc(0.0, 0.0);
        for (Eigen::Index i = 0; i < nb; ++i)
            acc += m.at(i, j, i, k);
        for (Eigen::Index mm = 0; mm < na; ++mm) {
            if (mm == j)
                continue;
            const double sm = s(mm);
            cplx term(0.0, 0.0);
            if (sk != 0.0)
                term += sk * sj * m.at(k, mm, j, mm);
            if (sm != 0.0)
                term += sm * sm * m.at(mm, j, mm, k);
            acc += term / gap(mm);
        }
        cplx diag(0.0, 0.0);
        if (sk != 0.0)
            diag += sk * m.at(k, j, j, j);
        diag += sj * m.at(j, j, j, k);
        acc -= sj * diag / gap(k);
        out.e_dv += (acc / gap(k)) * svd.v.col(k);
    }
    return out;
}

// E{dH X dH^H} = sum_ij X(i,j) C_ij
CMatrix left_quadratic(const CsiErrorModel& err, const CMatrix& x, Eigen::Index nb) {
    if (err.is_iid())
        return CMatrix::Identity(nb, nb) * (err.sigma_h_sq() * x.trace());
    CMatrix out = CMatrix::Zero(nb, nb);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            out += x(i, j) * err.column_block(i, j, nb);
    return out;
}

// E{dH^H Y dH}(i,j) = Tr(Y C_ji)
CMatrix right_quadratic(const CsiErrorModel& err, const CMatrix& y, Eigen::Index na) {
    if (err.is_iid())
        return CMatrix::Identity(na, na) * (err.sigma_h_sq() * y.trace());
    const Eigen::Index nb = y.rows();
    CMatrix out(na, na);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < na; ++j)
            out(i, j) = (y * err.column_block(j, i, nb)).trace();
    return out;
}

} // namespace

PerturbMoments compute_moments(const SvdPartition& svd, const CsiErrorModel& err) {
    const Eigen::Index nb = svd.rows();
    const Eigen::Index na = svd.cols();
    if (nb > na)
        throw OrientationError("perturbation analysis needs N_a >= N_b; pass the transposed channel");
    if (svd.ill_conditioned)
        throw IllConditionedError("singular values too close for the second-order expansion");
    err.check_dims(nb, na);

    const Eigen::Index f = svd.rank();
    const Eigen::Index fs = f - 1;
    const double sf2 = svd.sigma_f() * svd.sigma_f();

    PerturbMoments out;
    out.d = (svd.sigma_s().array().square() - sf2).inverse().matrix();
    const CMatrix dmat = out.d.cast<cplx>().asDiagonal();

    const CVector vf = svd.v_f();
    out.g = left_quadratic(err, vf * vf.adjoint(), nb);
    out.g_prime = left_quadratic(err, svd.v_s() * dmat * svd.v_s().adjoint(), nb);
    out.k = left_quadratic(err, svd.v_s() * svd.v_s().adjoint(), nb);
    out.g_dprime = right_quadratic(err, svd.u_s() * dmat * svd.u_s().adjoint(), na);

    const BasisCovariance m(svd, err);
    out.e_dv_s = CMatrix::Zero(na, fs);
    out.e_dsigma_s = RVector::Zero(fs);
    for (Eigen::Index j = 0; j < fs; ++j) {
        const VectorMoment vm = vector_moment(svd, m, j);
        out.e_dv_s.col(j) = vm.e_dv;
        out.e_dsigma_s(j) = vm.e_dsigma;
    }
    out.e_vs_dvs = svd.v_s().adjoint() * out.e_dv_s;

    const VectorMoment first = vector_moment(svd, m, 0);
    out.e_dv1 = first.e_dv;
    out.e_v1_dv1 = first.e_v_dv;
    out.e_dsigma1 = first.e_dsigma;
    out.e_dsigma1_sq = first.e_dsigma_sq;
    return out;
}

NaivePrediction naive_prediction_terms(const SvdPartition& svd, const PerturbMoments& moments,
                                       const ChannelSet& chan, double target_sinr,
                                       bool outage_rule) {
    if (!(target_sinr > 0.0))
        throw ParameterError("target SINR must be positive");
    const double s1 = svd.sigma1();
    double rho = chan.sigma_b_sq * target_sinr / (s1 * s1 * chan.power_p);
    if (!(rho < 1.0)) {
        if (!outage_rule)
            throw ParameterError("naive prediction needs a nominal design that is not in outage");
        rho = 1.0;
    }
    const Eigen::Index na = chan.na();
    const double beta = na > 1 ? (1.0 - rho) * chan.power_p / static_cast<double>(na - 1) : 0.0;

    // E{v1^H dv1} + E{dv1^H v1}
    const double pair = 2.0 * moments.e_v1_dv1.real();
    const double upsilon = 2.0 * moments.e_dsigma1 / s1 + moments.e_dsigma1_sq / (s1 * s1);

    NaivePrediction p;
    p.signal = s1 * s1 * rho * chan.power_p * (1.0 + pair - upsilon);
    p.interference_noise = -s1 * s1 * beta * pair + chan.sigma_b_sq;
    if (!(p.interference_noise > 0.0) || !(p.signal > 0.0))
        throw ValidityRangeError("CSI error too large for the second-order SINR prediction");
    return p;
}

double predict_naive_sinr(const SvdPartition& svd, const PerturbMoments& moments,
                          const ChannelSet& chan, double target_sinr) {
    return naive_prediction_terms(svd, moments, chan, target_sinr).sinr();
}

TxScheme design_from_estimate(const ChannelSet& chan, const ChannelMatrix& h_tilde,
                              double target_sinr) {
    if (h_tilde.rows() != chan.nb() || h_tilde.cols() != chan.na())
        throw DimensionError("channel estimate does not match Bob's channel");
    ChannelSet assumed = chan;
    assumed.h_ba = h_tilde;
    return design_artificial_noise(assumed, partition_svd(h_tilde), target_sinr);
}

SinrReport simulate_naive(const ChannelSet& chan, const SvdPartition& svd,
                          const ChannelMatrix& err_sample, double target_sinr) {
    if (err_sample.rows() != chan.nb() || err_sample.cols() != chan.na())
        throw DimensionError("CSI error sample does not match Bob's channel");
    const ChannelMatrix h_tilde(chan.h_ba.matrix() + err_sample.matrix());
    const TxScheme sent = design_from_estimate(chan, h_tilde, target_sinr);
    const RxBeamformer w_b{chan.h_ba.matrix() * svd.v1(), RxKind::matched};
    return evaluate_sinr(chan, sent, w_b, eve_mmse_beamformer(chan, sent), sent.q_z);
}

SinrReport simulate_naive(const ChannelSet& chan, const ChannelMatrix& err_sample,
                          double target_sinr) {
    return simulate_naive(chan, partition_svd(chan.h_ba), err_sample, target_sinr);
}

} // namespace wiretap

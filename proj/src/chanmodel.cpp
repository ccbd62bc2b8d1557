#include "wiretap/chanmodel.hpp"

#include <cmath>
#include <string>

#include "wiretap/random.hpp"

namespace wiretap {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kGapTol = 1e-8;
constexpr double kPsdTol = 1e-9;

// Index of the largest-magnitude entry; the first one wins on exact ties.
Eigen::Index argmax_abs(const Eigen::Ref<const CVector>& x) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < x.size(); ++i)
        if (std::abs(x(i)) > std::abs(x(best)))
            best = i;
    return best;
}

cplx unit_phase(cplx z) {
    const double mag = std::abs(z);
    return mag > 0.0 ? z / mag : cplx(1.0, 0.0);
}

} // namespace

ChannelMatrix::ChannelMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.cols() < 1)
        throw DimensionError("channel matrix must have at least one row and column");
    if (!entries_.allFinite())
        throw ParameterError("channel matrix has non-finite entries");
}

double ChannelMatrix::average_gain() const {
    return entries_.squaredNorm() / static_cast<double>(entries_.size());
}

void ChannelSet::validate() const {
    if (h_ba.cols() != h_ea.cols())
        throw DimensionError("Bob and Eve channels must share the transmit dimension N_a");
    if (!(sigma_b_sq > 0.0) || !(sigma_e_sq > 0.0))
        throw ParameterError("noise powers must be positive");
    if (!(power_p > 0.0))
        throw ParameterError("transmit power must be positive");
}

ChannelSet make_channel_set(ChannelMatrix h_ba, ChannelMatrix h_ea, const LinkBudget& budget) {
    ChannelSet set{std::move(h_ba), std::move(h_ea), budget.sigma_b_sq, budget.sigma_e_sq,
                   budget.power_p};
    set.validate();
    return set;
}

CMatrix SvdPartition::reconstruct() const {
    const Eigen::Index f = rank();
    return u.leftCols(f) * sigma.asDiagonal() * v.leftCols(f).adjoint();
}

CsiErrorModel CsiErrorModel::iid(double sigma_h_sq) {
    if (!(sigma_h_sq >= 0.0) || !std::isfinite(sigma_h_sq))
        throw ParameterError("error variance must be finite and non-negative");
    CsiErrorModel m;
    m.sigma_h_sq_ = sigma_h_sq;
    return m;
}

CsiErrorModel CsiErrorModel::full(CMatrix cov) {
    if (cov.rows() != cov.cols() || cov.rows() == 0)
        throw DimensionError("error covariance must be square");
    if (!cov.allFinite())
        throw ParameterError("error covariance has non-finite entries");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.adjoint()).cwiseAbs().maxCoeff() > kPsdTol * scale)
        throw ParameterError("error covariance is not Hermitian");
    const CMatrix herm = 0.5 * (cov + cov.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kPsdTol * scale)
        throw ParameterError("error covariance is not positive semidefinite");
    CsiErrorModel m;
    m.cov_ = herm;
    m.sigma_h_sq_ = herm.diagonal().real().mean();
    return m;
}

void CsiErrorModel::check_dims(Eigen::Index nb, Eigen::Index na) const {
    if (cov_ && cov_->rows() != nb * na)
        throw DimensionError("error covariance is " + std::to_string(cov_->rows()) +
                             " square but the channel has " + std::to_string(nb * na) +
                             " entries");
}

CMatrix CsiErrorModel::dense(Eigen::Index nb, Eigen::Index na) const {
    check_dims(nb, na);
    if (cov_)
        return *cov_;
    return CMatrix::Identity(nb * na, nb * na) * sigma_h_sq_;
}

CMatrix CsiErrorModel::column_block(Eigen::Index i, Eigen::Index j, Eigen::Index nb) const {
    if (cov_)
        return cov_->block(i * nb, j * nb, nb, nb);
    return i == j ? CMatrix(CMatrix::Identity(nb, nb) * sigma_h_sq_) : CMatrix::Zero(nb, nb);
}

CsiErrorModel CsiErrorModel::scaled(double alpha) const {
    CsiErrorModel m = *this;
    m.sigma_h_sq_ *= alpha;
    if (m.cov_)
        *m.cov_ *= alpha;
    return m;
}

ChannelSet generate_channels(int na, int nb, int ne, double gamma_ea_sq, std::uint64_t seed,
                             const LinkBudget& budget) {
    if (na < 1 || nb < 1 || ne < 1)
        throw DimensionError("antenna counts must be at least 1");
    if (!(gamma_ea_sq > 0.0))
        throw ParameterError("gamma_ea^2 must be positive");
    ComplexGaussian gauss(seed);
    CMatrix h_ba = gauss.matrix(nb, na);
    CMatrix h_ea = std::sqrt(gamma_ea_sq) * gauss.matrix(ne, na);
    return make_channel_set(ChannelMatrix(std::move(h_ba)), ChannelMatrix(std::move(h_ea)), budget);
}

SvdPartition partition_svd(const ChannelMatrix& h) {
    Eigen::JacobiSVD<CMatrix> svd(h.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdPartition out;
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    out.sigma = svd.singularValues();

    const Eigen::Index f = out.sigma.size();
    const double s1 = out.sigma(0);
    if (!(s1 > 0.0) || out.sigma(f - 1) < kRankTol * s1)
        throw DegenerateChannelError("channel is rank deficient (sigma_F < 1e-10 sigma_1)");

    for (Eigen::Index j = 0; j < out.v.cols(); ++j) {
        const cplx rot = std::conj(unit_phase(out.v(argmax_abs(out.v.col(j)), j)));
        out.v.col(j) *= rot;
        if (j < f)
            out.u.col(j) *= rot;
    }
    // left null space (tall channels only)
    for (Eigen::Index j = f; j < out.u.cols(); ++j)
        out.u.col(j) *= std::conj(unit_phase(out.u(argmax_abs(out.u.col(j)), j)));

    for (Eigen::Index i = 0; i + 1 < f; ++i) {
        const double gap = out.sigma(i) * out.sigma(i) - out.sigma(i + 1) * out.sigma(i + 1);
        if (gap < kGapTol * s1 * s1)
            out.ill_conditioned = true;
    }
    return out;
}

CVector align_phase(const CVector& candidate, const CVector& reference) {
    return candidate * std::conj(unit_phase(reference.dot(candidate)));
}

ChannelMatrix sample_csi_error(const CsiErrorModel& model, int nb, int na, std::uint64_t seed) {
    if (nb < 1 || na < 1)
        throw DimensionError("antenna counts must be at least 1");
    model.check_dims(nb, na);
    ComplexGaussian gauss(seed);
    CMatrix white = gauss.matrix(nb, na);
    if (model.is_iid())
        return ChannelMatrix(std::sqrt(model.sigma_h_sq()) * white);

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(model.dense(nb, na));
    const RVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const CMatrix factor = eig.eigenvectors() * root.asDiagonal();
    const CVector vec = factor * Eigen::Map<const CVector>(white.data(), white.size());
    return ChannelMatrix(Eigen::Map<const CMatrix>(vec.data(), nb, na));
}

ChannelMatrix perturb_ecsi(const ChannelMatrix& h_ea, double gamma, std::uint64_t seed) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw ParameterError("ECSI blend gamma must lie in [0, 1]");
    if (gamma == 0.0)
        return h_ea;
    ComplexGaussian gauss(seed);
    const CMatrix w = gauss.matrix(h_ea.rows(), h_ea.cols());
    return ChannelMatrix(std::sqrt(1.0 - gamma) * h_ea.matrix() + std::sqrt(gamma) * w);
}

} // namespace wiretap

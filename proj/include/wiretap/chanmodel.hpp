#pragma once

#include <cstdint>
#include <optional>

#include "wiretap/types.hpp"

namespace wiretap {

/// Complex channel gain matrix. Entries are always finite.
class ChannelMatrix {
  public:
    ChannelMatrix() = default;
    explicit ChannelMatrix(CMatrix entries);

    const CMatrix& matrix() const { return entries_; }
    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }

    /// ||H||_F^2 / (rows * cols)
    double average_gain() const;
    ChannelMatrix transpose() const { return ChannelMatrix(entries_.transpose()); }

  private:
    CMatrix entries_;
};

/// Noise and power budget of a link, all linear.
struct LinkBudget {
    double sigma_b_sq = 1.0;
    double sigma_e_sq = 1.0;
    double power_p = 100.0;
};

/// Everything that is fixed for one trial: Bob's and Eve's channels plus the budget.
struct ChannelSet {
    ChannelMatrix h_ba;
    ChannelMatrix h_ea;
    double sigma_b_sq = 1.0;
    double sigma_e_sq = 1.0;
    double power_p = 100.0;

    Eigen::Index na() const { return h_ba.cols(); }
    Eigen::Index nb() const { return h_ba.rows(); }
    Eigen::Index ne() const { return h_ea.rows(); }

    /// Throws ParameterError / DimensionError if the set is inconsistent.
    void validate() const;
};

ChannelSet make_channel_set(ChannelMatrix h_ba, ChannelMatrix h_ea, const LinkBudget& budget);

/// SVD of Bob's channel split as [U_s u_F] diag(Sigma_s, sigma_F) [V_s v_F]^H.
///
/// Full bases are kept: `u` is rows x rows and `v` is cols x cols (the columns of
/// `v` past F span the right null space). Right singular vectors are
/// phase-normalized so that their largest-magnitude entry is real and positive;
/// matching left vectors carry the same rotation, so U Sigma V^H is unchanged.
struct SvdPartition {
    CMatrix u;
    RVector sigma; // F = min(rows, cols) values, descending
    CMatrix v;
    /// Some singular-value gap is below 1e-8 * sigma_1^2; perturbation moments are unreliable.
    bool ill_conditioned = false;

    Eigen::Index rank() const { return sigma.size(); }
    Eigen::Index rows() const { return u.rows(); }
    Eigen::Index cols() const { return v.rows(); }

    double sigma1() const { return sigma(0); }
    auto u1() const { return u.col(0); }
    auto v1() const { return v.col(0); }

    auto u_s() const { return u.leftCols(rank() - 1); }
    auto v_s() const { return v.leftCols(rank() - 1); }
    auto sigma_s() const { return sigma.head(rank() - 1); }
    auto u_f() const { return u.col(rank() - 1); }
    auto v_f() const { return v.col(rank() - 1); }
    double sigma_f() const { return sigma(rank() - 1); }

    /// The cols-1 right singular vectors other than v_1 (interference subspace).
    auto t_prime() const { return v.rightCols(cols() - 1); }

    CMatrix reconstruct() const;
};

/// Error covariance of vec(Delta H) (column stacking). Either sigma_H^2 I or a
/// full Hermitian PSD matrix.
class CsiErrorModel {
  public:
    static CsiErrorModel iid(double sigma_h_sq);
    /// Throws ParameterError unless `cov` is Hermitian PSD within 1e-9.
    static CsiErrorModel full(CMatrix cov);

    bool is_iid() const { return !cov_.has_value(); }
    double sigma_h_sq() const { return sigma_h_sq_; }
    /// Dense covariance for an nb x na error matrix.
    CMatrix dense(Eigen::Index nb, Eigen::Index na) const;
    /// C_ij = E{ dH(:,i) dH(:,j)^H }, nb x nb.
    CMatrix column_block(Eigen::Index i, Eigen::Index j, Eigen::Index nb) const;
    void check_dims(Eigen::Index nb, Eigen::Index na) const;
    CsiErrorModel scaled(double alpha) const;

  private:
    CsiErrorModel() = default;
    double sigma_h_sq_ = 0.0;
    std::optional<CMatrix> cov_;
};

/// Bob's and Eve's channels with CN(0,1) (Bob) and CN(0, gamma_ea_sq) (Eve) entries.
ChannelSet generate_channels(int na, int nb, int ne, double gamma_ea_sq, std::uint64_t seed,
                             const LinkBudget& budget = {});

/// Throws DegenerateChannelError when sigma_F < 1e-10 sigma_1.
SvdPartition partition_svd(const ChannelMatrix& h);

/// Phase of `candidate` rotated so that reference^H candidate is real and non-negative.
CVector align_phase(const CVector& candidate, const CVector& reference);

ChannelMatrix sample_csi_error(const CsiErrorModel& model, int nb, int na, std::uint64_t seed);

/// sqrt(1 - gamma) H_ea + sqrt(gamma) W with W i.i.d. CN(0,1).
ChannelMatrix perturb_ecsi(const ChannelMatrix& h_ea, double gamma, std::uint64_t seed);

} // namespace wiretap

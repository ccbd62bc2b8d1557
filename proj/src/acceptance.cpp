#include "wiretap/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "wiretap/oracle.hpp"
#include "wiretap/random.hpp"
#include "wiretap/simharness.hpp"
#include "wiretap/units.hpp"

namespace wiretap::acceptance {

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double db(double x) { return to_db(std::max(x, 1e-300)); }

// Standard error of 10 log10(mean) from the linear standard error.
double se_db(const Estimate& e) { return 10.0 / std::log(10.0) * e.stderr_ / e.mean; }

ExperimentConfig base_config(const Options& o) {
    ExperimentConfig c;
    c.trials = o.trials;
    c.master_seed = o.seed;
    c.threads = o.threads;
    return c;
}

template <class F>
CheckResult timed(int id, const char* name, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    r.id = id;
    r.name = name;
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

struct PerfectTrial {
    ChannelSet chan;
    TxScheme scheme;
    SinrReport report;
    SvdPartition svd;
    double target;
};

PerfectTrial perfect_trial(const Options& o, int i) {
    static constexpr int kN[] = {2, 4, 5, 8};
    static constexpr double kS[] = {10.0, 20.0};
    const int n = kN[i % 4];
    const double target = from_db(kS[(i / 4) % 2]);
    PerfectTrial t;
    t.chan = generate_channels(n, n, n, 1.0, derive_seed(o.seed ^ 0x1ULL, static_cast<std::uint64_t>(i)));
    t.svd = partition_svd(t.chan.h_ba);
    t.scheme = design_artificial_noise(t.chan, t.svd, target);
    t.report = evaluate_perfect_csi(t.chan, t.svd, target);
    t.target = target;
    return t;
}

bool entries_close(const CMatrix& est, const CMatrix& closed, double* worst_abs) {
    bool ok = est.rows() == closed.rows() && est.cols() == closed.cols();
    for (Eigen::Index i = 0; ok && i < est.rows(); ++i)
        for (Eigen::Index j = 0; j < est.cols(); ++j) {
            const double d = std::abs(est(i, j) - closed(i, j));
            *worst_abs = std::max(*worst_abs, d);
            if (!(d <= 1e-4 || d <= 0.1 * std::abs(closed(i, j))))
                ok = false;
        }
    return ok;
}

double n_of(const PerfectTrial& t) { return static_cast<double>(t.chan.na()); }

CMatrix scalar(double x) { return CMatrix::Constant(1, 1, cplx(x, 0.0)); }

} // namespace

CheckResult perfect_csi_exactness(const Options& o) {
    return timed(1, "perfect-CSI exactness", [&](CheckResult& r) {
        double worst_sinr = 0.0, worst_power = 0.0;
        int outages = 0;
        for (int i = 0; i < o.exactness_channels; ++i) {
            const PerfectTrial t = perfect_trial(o, i);
            const double p = t.chan.power_p;
            const double power = t.scheme.q_z.trace().real() + t.scheme.rho * p;
            worst_power = std::max(worst_power, std::abs(power - p) / p);
            if (t.scheme.outage) {
                ++outages;
                continue;
            }
            worst_sinr = std::max(worst_sinr, std::abs(t.report.sinr_b - t.target) / t.target);
        }
        r.passed = worst_sinr <= 1e-9 && worst_power <= 1e-9;
        r.detail = fmt("%d channels (%d outage), max rel SINR error %.2e, max rel power error %.2e",
                       o.exactness_channels, outages, worst_sinr, worst_power);
    });
}

CheckResult orthogonality(const Options& o) {
    return timed(2, "artificial noise orthogonal to Bob", [&](CheckResult& r) {
        double worst = 0.0, factor_gap = 0.0;
        for (int i = 0; i < o.exactness_channels; ++i) {
            const PerfectTrial t = perfect_trial(o, i);
            const CMatrix& h = t.chan.h_ba.matrix();
            const CVector w = bob_matched_beamformer(t.chan, t.scheme).w;
            const CVector hw = h.adjoint() * w;
            // q_z = beta T' T'^H, so the received artificial power is beta ||T'^H H^H w||^2.
            double interference = 0.0;
            if (!t.scheme.outage && n_of(t) > 1) {
                const double beta = (1.0 - t.scheme.rho) * t.chan.power_p / (n_of(t) - 1);
                const CMatrix tp = t.svd.t_prime();
                interference = beta * (tp.adjoint() * hw).squaredNorm();
                factor_gap = std::max(factor_gap, (t.scheme.q_z - beta * tp * tp.adjoint()).norm() / beta);
            }
            const double signal = t.scheme.rho * t.chan.power_p * std::norm(hw.dot(t.scheme.t));
            worst = std::max(worst, interference / signal);
        }
        r.passed = worst <= 1e-18 && factor_gap <= 1e-12;
        r.detail = fmt("max interference/signal %.2e over %d channels (covariance factor gap %.1e)", worst,
                       o.exactness_channels, factor_gap);
    });
}

CheckResult prediction_accuracy(const Options& o) {
    return timed(3, "naive SINR prediction vs Monte Carlo", [&](CheckResult& r) {
        ExperimentConfig c = ExperimentConfig::preset(Scenario::fig2_prediction);
        c.trials = o.trials;
        c.master_seed = o.seed;
        c.threads = o.threads;
        c.sigma_h_db.clear();
        for (double s = -30.0; s <= -10.0 + 1e-9; s += 2.5)
            c.sigma_h_db.push_back(s);
        const SweepResult res = run_prediction_comparison(c);
        double worst = 0.0;
        std::string where;
        for (const SweepPoint& p : res.points) {
            const double mc = db(p.stats.at(Scheme::naive).roe_b.mean);
            const double cf = db(p.stats.at(Scheme::analytic_naive).roe_b.mean);
            if (std::abs(mc - cf) >= worst) {
                worst = std::abs(mc - cf);
                where = fmt("N=%d sigma_H=%g dB: closed form %.2f dB, simulated %.2f dB", p.na,
                            p.sigma_h_db, cf, mc);
            }
        }
        r.passed = worst <= 1.0;
        r.detail = fmt("worst gap %.3f dB at %s", worst, where.c_str());
    });
}

CheckResult sinr_vs_target(const Options& o) {
    return timed(4, "SINR vs target at sigma_H = -10 dB", [&](CheckResult& r) {
        ExperimentConfig c = base_config(o);
        c.na = {5};
        c.target_sinr_db = {20.0};
        c.sigma_h_db = {-10.0};
        c.schemes = {Scheme::naive, Scheme::robust_fdd, Scheme::robust_tdd};
        const SweepResult res = run_experiment(c);
        const SweepPoint& p = res.points.front();
        const double naive = db(p.stats.at(Scheme::naive).roe_b.mean);
        const double eve = db(p.stats.at(Scheme::naive).roe_e.mean);
        const double fdd = db(p.stats.at(Scheme::robust_fdd).roe_b.mean);
        const double tdd = db(p.stats.at(Scheme::robust_tdd).roe_b.mean);
        const double below_target = 20.0 - naive;
        const double below_eve = eve - naive;
        const bool ok_target = below_target >= 15.0 - 1.5 && below_target <= 17.0 + 1.5;
        const bool ok_eve = below_eve >= 6.0 - 1.5 && below_eve <= 7.0 + 1.5;
        const bool ok_fdd = std::abs(fdd - 20.0) <= 1.0 + 1.5;
        const bool ok_tdd = tdd >= naive - 1.5 && tdd <= fdd + 1.5;
        r.passed = ok_target && ok_eve && ok_fdd && ok_tdd;
        r.detail = fmt("naive %.2f dB below target%s, %.2f dB below Eve%s; FDD %.2f dB%s; TDD %.2f dB%s",
                       below_target, ok_target ? "" : " (X)", below_eve, ok_eve ? "" : " (X)", fdd,
                       ok_fdd ? "" : " (X)", tdd, ok_tdd ? "" : " (X)");
    });
}

CheckResult secrecy_behaviour(const Options& o) {
    return timed(5, "secrecy proxy vs target", [&](CheckResult& r) {
        ExperimentConfig c = base_config(o);
        c.na = {5};
        c.target_sinr_db = {5.0, 10.0, 15.0, 20.0};
        c.sigma_h_db = {-10.0};
        c.schemes = {Scheme::perfect, Scheme::known_ecsi, Scheme::naive, Scheme::robust_fdd,
                     Scheme::robust_tdd};
        const SweepResult res = run_experiment(c);
        bool ok = true;
        std::string detail;
        for (const SweepPoint& p : res.points) {
            const auto& naive = p.stats.at(Scheme::naive).secrecy;
            const auto& fdd = p.stats.at(Scheme::robust_fdd).secrecy;
            const auto& tdd = p.stats.at(Scheme::robust_tdd).secrecy;
            const double known = p.stats.at(Scheme::known_ecsi).secrecy.mean;
            bool dominates = true;
            for (const auto& [s, st] : p.stats)
                if (s != Scheme::known_ecsi && st.secrecy.mean > known)
                    dominates = false;
            const bool naive_zero = naive.mean <= 0.05;
            const bool robust_pos = fdd.mean > 3.0 * fdd.stderr_ && fdd.mean > 0.0 &&
                                    tdd.mean > 3.0 * tdd.stderr_ && tdd.mean > 0.0;
            ok = ok && naive_zero && robust_pos && dominates;
            detail += fmt("%sS=%g: naive %.3f%s fdd %.3f tdd %.3f%s known %.3f%s", detail.empty() ? "" : "; ",
                          p.target_sinr_db, naive.mean, naive_zero ? "" : " (X)", fdd.mean, tdd.mean,
                          robust_pos ? "" : " (X)", known, dominates ? "" : " (X)");
        }
        r.passed = ok;
        r.detail = detail;
    });
}

CheckResult sigma_sweep(const Options& o) {
    return timed(6, "SINR vs CSI error level", [&](CheckResult& r) {
        ExperimentConfig c = base_config(o);
        c.na = {5};
        c.target_sinr_db = {20.0};
        c.sigma_h_db.clear();
        for (double s = -30.0; s <= 0.0 + 1e-9; s += 2.5)
            c.sigma_h_db.push_back(s);
        c.schemes = {Scheme::perfect, Scheme::robust_fdd, Scheme::robust_tdd};
        const SweepResult res = run_experiment(c);

        // Bob's own loss for FDD, and for both schemes the loss of Bob's margin
        // over Eve relative to perfect CSI.
        double worst_fdd_loss = 0.0;
        struct Track {
            double threshold = INFINITY;
            bool monotone = true;
            double prev = -INFINITY;
            double prev_se = 0.0;
        } fdd, tdd;
        for (const SweepPoint& p : res.points) {
            const auto& per = p.stats.at(Scheme::perfect);
            const double margin_ref = db(per.roe_b.mean) - db(per.roe_e.mean);
            auto step = [&](Track& t, const SchemeStats& st) {
                const double loss = margin_ref - (db(st.roe_b.mean) - db(st.roe_e.mean));
                const double se = std::hypot(se_db(st.roe_b), se_db(st.roe_e));
                if (loss > 1.0 && std::isinf(t.threshold))
                    t.threshold = p.sigma_h_db;
                if (loss < t.prev - 3.0 * std::hypot(se, t.prev_se))
                    t.monotone = false;
                t.prev = loss;
                t.prev_se = se;
            };
            const auto& f = p.stats.at(Scheme::robust_fdd);
            step(fdd, f);
            step(tdd, p.stats.at(Scheme::robust_tdd));
            if (p.sigma_h_db <= -15.0 + 1e-9)
                worst_fdd_loss = std::max(worst_fdd_loss, 20.0 - db(f.roe_b.mean));
        }
        const bool ok_fdd = worst_fdd_loss < 0.5;
        const bool ok_thr = tdd.threshold < fdd.threshold;
        const bool ok_mono = fdd.monotone && tdd.monotone;
        r.passed = ok_fdd && ok_thr && ok_mono;
        r.detail = fmt("FDD Bob loss up to -15 dB %.3f dB%s; margin-loss thresholds FDD %g dB, TDD %g dB%s; "
                       "monotone FDD %s TDD %s",
                       worst_fdd_loss, ok_fdd ? "" : " (X)", fdd.threshold, tdd.threshold,
                       ok_thr ? "" : " (X)", fdd.monotone ? "yes" : "no", tdd.monotone ? "yes" : "no");
    });
}

CheckResult ecsi_comparison(const Options& o) {
    return timed(7, "Eve SINR vs her antenna count", [&](CheckResult& r) {
        ExperimentConfig c = ExperimentConfig::preset(Scenario::fig1_ne_sweep);
        c.na = {4};
        c.trials = o.trials;
        c.master_seed = o.seed;
        c.threads = o.threads;
        const SweepResult res = run_ecsi_comparison(c);
        double worst_null = 0.0, worst_gain = -INFINITY;
        bool imperfect_worse = true;
        std::string imp;
        for (const SweepPoint& p : res.points) {
            const double unknown = db(p.stats.at(Scheme::perfect).roe_e.mean);
            const double known = p.stats.at(Scheme::known_ecsi).roe_e.mean;
            const double imperfect = db(p.stats.at(Scheme::imperfect_ecsi).roe_e.mean);
            if (p.ne < 4)
                worst_null = std::max(worst_null, known);
            else
                worst_gain = std::max(worst_gain, unknown - db(known));
            if (p.ne <= 2) {
                imperfect_worse = imperfect_worse && imperfect > unknown;
                imp += fmt(" ne=%d: %.2f vs %.2f dB", p.ne, imperfect, unknown);
            }
        }
        const bool ok_null = worst_null <= 1e-4;
        const bool ok_gain = worst_gain < 2.0;
        r.passed = ok_null && ok_gain && imperfect_worse;
        r.detail = fmt("known-ECSI Eve SINR for ne<4 at most %.1f dB%s; max gain for ne>=4 %.2f dB%s; "
                       "imperfect vs unknown%s%s",
                       db(worst_null), ok_null ? "" : " (X)", worst_gain, ok_gain ? "" : " (X)",
                       imp.c_str(), imperfect_worse ? "" : " (X)");
    });
}

CheckResult moment_oracle(const Options& o) {
    return timed(8, "perturbation moments vs Monte Carlo", [&](CheckResult& r) {
        struct Shape {
            int nb, na;
        };
        const Shape shapes[] = {{2, 2}, {3, 3}, {5, 5}, {2, 4}};
        const CsiErrorModel err = CsiErrorModel::iid(from_db(-20.0));
        bool ok = true;
        std::string detail;
        for (const Shape& s : shapes) {
            ComplexGaussian g(7);
            const ChannelMatrix h(g.matrix(s.nb, s.na));
            const PerturbMoments m = compute_moments(partition_svd(h), err);
            const oracle::MomentEstimate e = oracle::monte_carlo_moments(h, err, o.oracle_draws, 99);
            double worst = 0.0;
            std::string bad;
            auto check = [&](const char* name, const CMatrix& est, const CMatrix& closed) {
                if (!entries_close(est, closed, &worst))
                    bad += std::string(bad.empty() ? "" : ",") + name;
            };
            check("E{dsigma1}", scalar(e.e_dsigma1), scalar(m.e_dsigma1));
            check("E{dsigma1^2}", scalar(e.e_dsigma1_sq), scalar(m.e_dsigma1_sq));
            check("E{v1'dv1}", scalar(e.e_v1_dv1.real()), scalar(m.e_v1_dv1.real()));
            check("E{dv1}", e.e_dv1, m.e_dv1);
            check("E{dVs}", e.e_dv_s, m.e_dv_s);
            check("E{Vs'dVs}", e.e_vs_dvs, m.e_vs_dvs);
            check("E{dSigma_s}", e.e_dsigma_s, m.e_dsigma_s);
            check("G", e.g, m.g);
            check("G'", e.g_prime, m.g_prime);
            check("G''", e.g_dprime, m.g_dprime);
            check("K", e.k, m.k);
            ok = ok && bad.empty();
            detail += fmt("%s%dx%d max abs dev %.1e%s%s", detail.empty() ? "" : "; ", s.nb, s.na, worst,
                          bad.empty() ? "" : " failing ", bad.c_str());
        }
        r.passed = ok;
        r.detail = fmt("%d draws each: ", o.oracle_draws) + detail;
    });
}

CheckResult degenerate_identities(const Options& o) {
    return timed(9, "degenerate and identity cases", [&](CheckResult& r) {
        std::vector<std::string> failures;
        auto expect = [&](bool cond, const std::string& what) {
            if (!cond)
                failures.push_back(what);
        };

        const double target = from_db(20.0);
        for (int n : {2, 4, 5}) {
            const ChannelSet chan = generate_channels(n, n, n, 1.0, derive_seed(o.seed, 900 + n));
            const SvdPartition svd = partition_svd(chan.h_ba);
            for (const CsiErrorModel& zero :
                 {CsiErrorModel::iid(0.0), CsiErrorModel::full(CMatrix::Zero(n * n, n * n))}) {
                const PerturbMoments m = compute_moments(svd, zero);
                const double all = m.g.norm() + m.g_prime.norm() + m.g_dprime.norm() + m.k.norm() +
                                   m.e_dv_s.norm() + m.e_vs_dvs.norm() + m.e_dsigma_s.norm() +
                                   std::abs(m.e_dsigma1) + std::abs(m.e_dsigma1_sq) +
                                   m.e_dv1.norm() + std::abs(m.e_v1_dv1);
                expect(all == 0.0, fmt("zero covariance leaves nonzero moments (n=%d)", n));
                const double pred = predict_naive_sinr(svd, m, chan, target);
                expect(std::abs(pred - target) <= 1e-12 * target,
                       fmt("zero-covariance prediction %.17g != target (n=%d)", pred, n));
                const ChannelMatrix no_error(CMatrix::Zero(n, n));
                const double tdd = tdd_receiver(chan, svd, m, no_error, target).report.sinr_b;
                expect(std::abs(tdd - target) <= 1e-9 * target,
                       fmt("TDD without error gives %.17g (n=%d)", tdd, n));
            }
            const double fdd = fdd_receiver(chan, chan.h_ba, target).report.sinr_b;
            expect(std::abs(fdd - target) <= 1e-9 * target, fmt("FDD with exact CSI gives %.17g", fdd));
            const ChannelMatrix same = perturb_ecsi(chan.h_ea, 0.0, 5);
            expect(same.matrix() == chan.h_ea.matrix(), "gamma = 0 ECSI blend changed the channel");
        }

        ExperimentConfig c = base_config(o);
        c.trials = 50;
        c.schemes = all_schemes();
        c.na = {1};
        c.sigma_h_db = {-20.0};
        try {
            const SweepResult res = run_experiment(c);
            expect(res.points.size() == 1, "N_a = 1 run produced no point");
        } catch (const std::exception& e) {
            failures.push_back(std::string("N_a = 1 run threw: ") + e.what());
        }
        c.na = {2};
        c.target_sinr_db = {60.0};
        try {
            const SweepResult res = run_experiment(c);
            const SchemeStats& st = res.points.front().stats.at(Scheme::perfect);
            expect(st.outages == st.trials, "60 dB target did not put every perfect-CSI trial in outage");
        } catch (const std::exception& e) {
            failures.push_back(std::string("outage run threw: ") + e.what());
        }

        r.passed = failures.empty();
        if (failures.empty()) {
            r.detail = "zero-covariance moments/prediction, exact-CSI robust receivers, gamma = 0, "
                       "N_a = 1 and outage runs all as expected";
        } else {
            for (const auto& f : failures)
                r.detail += (r.detail.empty() ? "" : "; ") + f;
        }
    });
}

std::vector<CheckResult> run_all(const Options& o,
                                 const std::function<void(const CheckResult&)>& on_result) {
    using Fn = CheckResult (*)(const Options&);
    const Fn checks[] = {perfect_csi_exactness, orthogonality,   prediction_accuracy,
                         sinr_vs_target,        secrecy_behaviour, sigma_sweep,
                         ecsi_comparison,       moment_oracle,   degenerate_identities};
    std::vector<CheckResult> out;
    for (Fn f : checks) {
        out.push_back(f(o));
        if (on_result)
            on_result(out.back());
    }
    return out;
}

} // namespace wiretap::acceptance

#include "wiretap/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "wiretap/random.hpp"
#include "wiretap/units.hpp"

#ifndef WIRETAP_VERSION
#define WIRETAP_VERSION "0.0.0-unknown"
#endif

namespace wiretap {

namespace {

struct SchemeName {
    Scheme scheme;
    std::string_view name;
};

constexpr SchemeName kSchemeNames[] = {
    {Scheme::perfect, "perfect"},
    {Scheme::known_ecsi, "known_ecsi"},
    {Scheme::imperfect_ecsi, "imperfect_ecsi"},
    {Scheme::naive, "naive"},
    {Scheme::robust_fdd, "robust_fdd"},
    {Scheme::robust_tdd, "robust_tdd"},
    {Scheme::analytic_naive, "analytic_naive"},
};

struct ScenarioName {
    Scenario scenario;
    std::string_view name;
};

constexpr ScenarioName kScenarioNames[] = {
    {Scenario::fig1_ne_sweep, "fig1_ne_sweep"},
    {Scenario::fig2_prediction, "fig2_prediction"},
    {Scenario::fig3_sinr_vs_target, "fig3_sinr_vs_target"},
    {Scenario::fig4_secrecy, "fig4_secrecy"},
    {Scenario::fig5_sigma_sweep, "fig5_sigma_sweep"},
    {Scenario::custom, "custom"},
};

std::vector<double> linspace_step(double first, double last, double step) {
    std::vector<double> out;
    const int n = static_cast<int>(std::lround((last - first) / step));
    for (int i = 0; i <= n; ++i)
        out.push_back(first + step * i);
    return out;
}

// One scheme's outcome on one trial.
struct TrialRecord {
    bool valid = false;
    bool outage = false;
    bool loaded = false;
    double sinr_b = 0.0;
    double sinr_e = 0.0;
    double secrecy = 0.0;
    double sig_b = 0.0;
    double inr_b = 0.0;
    double sig_e = 0.0;
    double inr_e = 0.0;
};

TrialRecord from_report(const SinrReport& r) {
    TrialRecord t;
    t.valid = true;
    t.outage = r.outage;
    t.sinr_b = r.sinr_b;
    t.sinr_e = r.sinr_e;
    t.secrecy = r.secrecy_capacity;
    t.sig_b = r.signal_b;
    t.inr_b = r.interference_noise_b;
    t.sig_e = r.signal_e;
    t.inr_e = r.interference_noise_e;
    return t;
}

struct PointParams {
    int na, nb, ne;
    double target_sinr_db;
    double sigma_h_db;
};

// Everything needed to evaluate every scheme on one trial.
void run_trial(const ExperimentConfig& cfg, const PointParams& p, const LinkBudget& budget,
               int trial, TrialRecord* out) {
    const std::uint64_t ts = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial));
    const double target = from_db(p.target_sinr_db);
    const ChannelSet chan =
        generate_channels(p.na, p.nb, p.ne, cfg.gamma_ea_sq, stream_seed(ts, Stream::channel), budget);
    const SvdPartition svd = partition_svd(chan.h_ba);
    const CsiErrorModel err = CsiErrorModel::iid(from_db(p.sigma_h_db));
    const ChannelMatrix dh = sample_csi_error(err, p.nb, p.na, stream_seed(ts, Stream::csi_error));

    std::optional<PerturbMoments> moments;
    bool moments_failed = false;
    auto get_moments = [&]() -> const PerturbMoments* {
        if (!moments && !moments_failed) {
            try {
                moments = compute_moments(svd, err);
            } catch (const IllConditionedError&) {
                moments_failed = true;
            }
        }
        return moments ? &*moments : nullptr;
    };

    for (std::size_t k = 0; k < cfg.schemes.size(); ++k) {
        TrialRecord& rec = out[k];
        switch (cfg.schemes[k]) {
        case Scheme::perfect:
            rec = from_report(evaluate_perfect_csi(chan, svd, target));
            break;
        case Scheme::known_ecsi:
        case Scheme::imperfect_ecsi: {
            const ChannelMatrix assumed =
                cfg.schemes[k] == Scheme::known_ecsi
                    ? chan.h_ea
                    : perturb_ecsi(chan.h_ea, cfg.gamma_ecsi, stream_seed(ts, Stream::ecsi));
            const TxScheme s = design_known_ecsi(chan, assumed, target);
            rec = from_report(evaluate_sinr(chan, s, bob_matched_beamformer(chan, s),
                                            eve_mmse_beamformer(chan, s), s.q_z));
            break;
        }
        case Scheme::naive:
            rec = from_report(simulate_naive(chan, svd, dh, target));
            break;
        case Scheme::robust_fdd:
            rec = from_report(
                fdd_receiver(chan, ChannelMatrix(chan.h_ba.matrix() + dh.matrix()), target, cfg.robust)
                    .report);
            break;
        case Scheme::robust_tdd: {
            const PerturbMoments* m = get_moments();
            if (!m)
                break;
            const RobustOutcome o = tdd_receiver(chan, svd, *m, dh, target, cfg.robust);
            rec = from_report(o.report);
            rec.loaded = o.loaded;
            break;
        }
        case Scheme::analytic_naive: {
            const PerturbMoments* m = get_moments();
            if (!m)
                break;
            try {
                const NaivePrediction np = naive_prediction_terms(svd, *m, chan, target, true);
                rec.valid = true;
                rec.sig_b = np.signal;
                rec.inr_b = np.interference_noise;
                rec.sinr_b = np.sinr();
                const double s1 = svd.sigma1();
                rec.outage = !(budget.sigma_b_sq * target / (s1 * s1 * budget.power_p) < 1.0);
            } catch (const ValidityRangeError&) {
            }
            break;
        }
        }
    }
}

// Sums for a mean and for the delta-method error of a ratio of means.
struct RatioSums {
    double x = 0.0, y = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
    void add(double a, double b) {
        x += a;
        y += b;
        xx += a * a;
        yy += b * b;
        xy += a * b;
    }
    Estimate ratio(long n) const {
        Estimate e;
        if (n == 0 || y == 0.0)
            return e;
        const double dn = static_cast<double>(n);
        const double mx = x / dn;
        const double my = y / dn;
        e.mean = mx / my;
        if (n > 1) {
            const double vx = (xx - dn * mx * mx) / (dn - 1.0);
            const double vy = (yy - dn * my * my) / (dn - 1.0);
            const double cxy = (xy - dn * mx * my) / (dn - 1.0);
            const double v = (vx - 2.0 * e.mean * cxy + e.mean * e.mean * vy) / (my * my * dn);
            e.stderr_ = std::sqrt(std::max(v, 0.0));
        }
        return e;
    }
};

struct MeanSums {
    double s = 0.0, ss = 0.0;
    void add(double a) {
        s += a;
        ss += a * a;
    }
    Estimate estimate(long n) const {
        Estimate e;
        if (n == 0)
            return e;
        const double dn = static_cast<double>(n);
        e.mean = s / dn;
        if (n > 1) {
            const double v = (ss - dn * e.mean * e.mean) / (dn - 1.0);
            e.stderr_ = std::sqrt(std::max(v, 0.0) / dn);
        }
        return e;
    }
};

SchemeStats reduce(const std::vector<TrialRecord>& recs, std::size_t k, std::size_t stride,
                   int trials, bool eve) {
    SchemeStats st;
    MeanSums b, e, sec;
    RatioSums rb, re;
    for (int t = 0; t < trials; ++t) {
        const TrialRecord& r = recs[static_cast<std::size_t>(t) * stride + k];
        if (!r.valid) {
            ++st.invalid;
            continue;
        }
        ++st.trials;
        st.outages += r.outage;
        st.loaded += r.loaded;
        b.add(r.sinr_b);
        rb.add(r.sig_b, r.inr_b);
        if (eve) {
            e.add(r.sinr_e);
            re.add(r.sig_e, r.inr_e);
            sec.add(r.secrecy);
        }
    }
    st.sinr_b = b.estimate(st.trials);
    st.roe_b = rb.ratio(st.trials);
    if (eve) {
        st.sinr_e = e.estimate(st.trials);
        st.roe_e = re.ratio(st.trials);
        st.secrecy = sec.estimate(st.trials);
        st.secrecy_of_means = secrecy_capacity_proxy(st.roe_b.mean, st.roe_e.mean);
    }
    return st;
}

unsigned worker_count(const ExperimentConfig& cfg) {
    unsigned n = cfg.threads;
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return std::min<unsigned>(n, static_cast<unsigned>(cfg.trials));
}

SweepPoint run_point(const ExperimentConfig& cfg, const PointParams& p) {
    const LinkBudget budget{cfg.sigma_b_sq, cfg.sigma_e_sq, from_db(cfg.power_db)};
    const std::size_t stride = cfg.schemes.size();
    std::vector<TrialRecord> recs(static_cast<std::size_t>(cfg.trials) * stride);

    const unsigned workers = worker_count(cfg);
    auto work = [&](int first, int last) {
        for (int t = first; t < last; ++t)
            run_trial(cfg, p, budget, t, &recs[static_cast<std::size_t>(t) * stride]);
    };
    if (workers <= 1) {
        work(0, cfg.trials);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        const int chunk = (cfg.trials + static_cast<int>(workers) - 1) / static_cast<int>(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const int first = static_cast<int>(w) * chunk;
            const int last = std::min(cfg.trials, first + chunk);
            pool.emplace_back([&, w, first, last] {
                try {
                    work(first, last);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool)
            th.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    SweepPoint pt;
    pt.na = p.na;
    pt.nb = p.nb;
    pt.ne = p.ne;
    pt.target_sinr_db = p.target_sinr_db;
    pt.sigma_h_db = p.sigma_h_db;
    pt.extrapolated = cfg.has(Scheme::analytic_naive) && p.sigma_h_db > kPredictionValidityDb;
    for (std::size_t k = 0; k < stride; ++k)
        pt.stats[cfg.schemes[k]] = reduce(recs, k, stride, cfg.trials, cfg.schemes[k] != Scheme::analytic_naive);
    return pt;
}

std::string pick_axis(const ExperimentConfig& cfg) {
    struct Candidate {
        const char* name;
        std::size_t size;
    };
    const Candidate cands[] = {
        {"ne", cfg.ne.size()},
        {"target_sinr_db", cfg.target_sinr_db.size()},
        {"sigma_h_db", cfg.sigma_h_db.size()},
        {"nb", cfg.nb.size()},
        {"na", cfg.na.size()},
    };
    const Candidate* best = &cands[2];
    if (cfg.scenario == Scenario::fig1_ne_sweep)
        best = &cands[0];
    else if (cfg.scenario == Scenario::fig3_sinr_vs_target || cfg.scenario == Scenario::fig4_secrecy)
        best = &cands[1];
    else if (cfg.scenario == Scenario::custom)
        for (const auto& c : cands)
            if (c.size > best->size)
                best = &c;
    return best->name;
}

double axis_value(const std::string& axis, const PointParams& p) {
    if (axis == "ne")
        return p.ne;
    if (axis == "nb")
        return p.nb;
    if (axis == "na")
        return p.na;
    if (axis == "target_sinr_db")
        return p.target_sinr_db;
    return p.sigma_h_db;
}

SweepResult run_grid(const ExperimentConfig& cfg) {
    cfg.validate();
    SweepResult res;
    res.config = cfg;
    res.version = library_version();
    res.axis_name = pick_axis(cfg);
    for (std::size_t i = 0; i < cfg.na.size(); ++i) {
        const int na = cfg.na[i];
        const std::vector<int> nbs = cfg.nb.empty() ? std::vector<int>{na} : cfg.nb;
        const std::vector<int> nes = cfg.ne.empty() ? std::vector<int>{na} : cfg.ne;
        for (int nb : nbs)
            for (int ne : nes)
                for (double s : cfg.target_sinr_db)
                    for (double sh : cfg.sigma_h_db) {
                        const PointParams p{na, nb, ne, s, sh};
                        res.points.push_back(run_point(cfg, p));
                        res.axis.push_back(axis_value(res.axis_name, p));
                    }
    }
    return res;
}

} // namespace

std::string_view to_string(Scenario s) {
    for (const auto& n : kScenarioNames)
        if (n.scenario == s)
            return n.name;
    return "custom";
}

std::string_view to_string(Scheme s) {
    for (const auto& n : kSchemeNames)
        if (n.scheme == s)
            return n.name;
    return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
    for (const auto& n : kScenarioNames)
        if (n.name == name)
            return n.scenario;
    static constexpr std::pair<std::string_view, Scenario> kShort[] = {
        {"fig1", Scenario::fig1_ne_sweep},       {"fig2", Scenario::fig2_prediction},
        {"fig3", Scenario::fig3_sinr_vs_target}, {"fig4", Scenario::fig4_secrecy},
        {"fig5", Scenario::fig5_sigma_sweep},
    };
    for (const auto& [k, v] : kShort)
        if (k == name)
            return v;
    return std::nullopt;
}

std::optional<Scheme> parse_scheme(std::string_view name) {
    for (const auto& n : kSchemeNames)
        if (n.name == name)
            return n.scheme;
    return std::nullopt;
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> all = [] {
        std::vector<Scheme> v;
        for (const auto& n : kSchemeNames)
            v.push_back(n.scheme);
        return v;
    }();
    return all;
}

ExperimentConfig ExperimentConfig::preset(Scenario s) {
    ExperimentConfig c;
    c.scenario = s;
    switch (s) {
    case Scenario::fig1_ne_sweep:
        c.na = {4, 8};
        c.ne.clear();
        for (int n = 1; n <= 20; ++n)
            c.ne.push_back(n);
        c.target_sinr_db = {20.0};
        c.sigma_h_db = {-10.0};
        c.schemes = {Scheme::perfect, Scheme::known_ecsi, Scheme::imperfect_ecsi};
        break;
    case Scenario::fig2_prediction:
        c.na = {2, 5};
        c.target_sinr_db = {20.0};
        c.sigma_h_db = linspace_step(-30.0, -5.0, 2.5);
        c.schemes = {Scheme::naive, Scheme::analytic_naive};
        break;
    case Scenario::fig3_sinr_vs_target:
    case Scenario::fig4_secrecy:
        c.na = {5};
        c.target_sinr_db = linspace_step(0.0, 25.0, 2.5);
        c.sigma_h_db = {-10.0};
        c.schemes = {Scheme::perfect,    Scheme::known_ecsi, Scheme::naive,
                     Scheme::robust_fdd, Scheme::robust_tdd};
        break;
    case Scenario::fig5_sigma_sweep:
        c.na = {5};
        c.target_sinr_db = {20.0};
        c.sigma_h_db = linspace_step(-30.0, 0.0, 2.5);
        c.schemes = {Scheme::perfect, Scheme::naive, Scheme::robust_fdd, Scheme::robust_tdd};
        break;
    case Scenario::custom:
        break;
    }
    return c;
}

bool ExperimentConfig::has(Scheme s) const {
    return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

void ExperimentConfig::validate() const {
    if (trials < 1)
        throw ConfigError("trials must be ≥ 1");
    if (na.empty() || target_sinr_db.empty() || sigma_h_db.empty())
        throw ConfigError("sweep lists must not be empty");
    if (schemes.empty())
        throw ConfigError("no schemes selected");
    for (std::size_t i = 0; i < schemes.size(); ++i)
        for (std::size_t j = i + 1; j < schemes.size(); ++j)
            if (schemes[i] == schemes[j])
                throw ConfigError("scheme listed twice: " + std::string(to_string(schemes[i])));
    auto positive = [](const std::vector<int>& v, const char* what) {
        for (int x : v)
            if (x < 1)
                throw ConfigError(std::string(what) + " must be ≥ 1");
    };
    positive(na, "na");
    positive(nb, "nb");
    positive(ne, "ne");
    for (double s : target_sinr_db)
        if (!std::isfinite(s))
            throw ConfigError("target_sinr_db must be finite");
    for (double s : sigma_h_db)
        if (std::isnan(s) || s == std::numeric_limits<double>::infinity())
            throw ConfigError("sigma_h_db must be a number below +inf");
    if (!std::isfinite(power_db))
        throw ConfigError("power_db must be finite");
    if (!(sigma_b_sq > 0.0) || !(sigma_e_sq > 0.0) || !std::isfinite(sigma_b_sq) ||
        !std::isfinite(sigma_e_sq))
        throw ConfigError("noise powers must be positive");
    if (!(gamma_ecsi >= 0.0 && gamma_ecsi <= 1.0))
        throw ConfigError("gamma_ecsi must lie in [0, 1]");
    if (!(gamma_ea_sq > 0.0) || !std::isfinite(gamma_ea_sq))
        throw ConfigError("gamma_ea_sq must be positive");
    const bool perturbative = has(Scheme::robust_tdd) || has(Scheme::analytic_naive);
    if (perturbative) {
        for (int a : na) {
            const std::vector<int> nbs = nb.empty() ? std::vector<int>{a} : nb;
            for (int b : nbs)
                if (b > a)
                    throw ConfigError("robust_tdd and analytic_naive need na ≥ nb");
        }
    }
}

SweepResult run_experiment(const ExperimentConfig& cfg) { return run_grid(cfg); }

SweepResult run_prediction_comparison(const ExperimentConfig& cfg) {
    if (!cfg.has(Scheme::naive) || !cfg.has(Scheme::analytic_naive))
        throw ConfigError("prediction comparison needs the naive and analytic_naive schemes");
    return run_grid(cfg);
}

SweepResult run_ecsi_comparison(const ExperimentConfig& cfg) {
    for (Scheme s : cfg.schemes)
        if (s != Scheme::perfect && s != Scheme::known_ecsi && s != Scheme::imperfect_ecsi)
            throw ConfigError("ECSI comparison takes only perfect, known_ecsi and imperfect_ecsi");
    return run_grid(cfg);
}

SweepResult run_scenario(const ExperimentConfig& cfg) {
    switch (cfg.scenario) {
    case Scenario::fig1_ne_sweep:
        return run_ecsi_comparison(cfg);
    case Scenario::fig2_prediction:
        return run_prediction_comparison(cfg);
    default:
        return run_experiment(cfg);
    }
}

std::string library_version() { return WIRETAP_VERSION; }

} // namespace wiretap

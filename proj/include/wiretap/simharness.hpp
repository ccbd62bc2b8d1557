#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/robust.hpp"

namespace wiretap {

enum class Scenario {
    fig1_ne_sweep,
    fig2_prediction,
    fig3_sinr_vs_target,
    fig4_secrecy,
    fig5_sigma_sweep,
    custom,
};

enum class Scheme {
    perfect,
    known_ecsi,
    imperfect_ecsi,
    naive,
    robust_fdd,
    robust_tdd,
    analytic_naive,
};

std::string_view to_string(Scenario s);
std::string_view to_string(Scheme s);
std::optional<Scenario> parse_scenario(std::string_view name);
std::optional<Scheme> parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

struct ExperimentConfig {
    Scenario scenario = Scenario::custom;
    std::vector<int> na{5};
    /// Empty means "same as na" (and likewise for ne).
    std::vector<int> nb;
    std::vector<int> ne;
    std::vector<double> target_sinr_db{20.0};
    std::vector<double> sigma_h_db{-10.0};
    double gamma_ecsi = 0.05;
    /// Eve's average channel gain relative to Bob's.
    double gamma_ea_sq = 1.0;
    int trials = 3000;
    double power_db = 20.0;
    double sigma_b_sq = 1.0;
    double sigma_e_sq = 1.0;
    std::uint64_t master_seed = 42;
    std::vector<Scheme> schemes{Scheme::perfect, Scheme::naive, Scheme::robust_fdd,
                                Scheme::robust_tdd};
    RobustOptions robust;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;

    /// Reference defaults for a figure scenario.
    static ExperimentConfig preset(Scenario s);
    /// Throws ConfigError.
    void validate() const;
    bool has(Scheme s) const;
};

/// Mean and standard error of the mean.
struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct SchemeStats {
    /// Arithmetic means of the per-trial linear SINRs.
    Estimate sinr_b;
    Estimate sinr_e;
    /// Ratio of mean signal power to mean interference-plus-noise power.
    Estimate roe_b;
    Estimate roe_e;
    /// Mean of the per-trial clamped secrecy proxy.
    Estimate secrecy;
    /// Proxy evaluated on the ratio-of-expectations SINRs.
    double secrecy_of_means = 0.0;
    long trials = 0;
    long outages = 0;
    /// TDD trials whose expected covariance needed diagonal loading.
    long loaded = 0;
    /// Trials dropped because a prediction left its validity range.
    long invalid = 0;
};

struct SweepPoint {
    int na = 0;
    int nb = 0;
    int ne = 0;
    double target_sinr_db = 0.0;
    double sigma_h_db = 0.0;
    /// Prediction outside the region where the second-order analysis holds.
    bool extrapolated = false;
    std::map<Scheme, SchemeStats> stats;
};

struct SweepResult {
    /// Name of the swept parameter ("ne", "target_sinr_db", "sigma_h_db", ...).
    std::string axis_name;
    /// One value per point, so several curves may share axis values.
    std::vector<double> axis;
    std::vector<SweepPoint> points;
    ExperimentConfig config;
    std::string version;
};

/// Runs every point of the config's parameter grid with all requested schemes.
SweepResult run_experiment(const ExperimentConfig& cfg);
/// Naive Monte Carlo against the closed-form prediction (fig2 scenario).
SweepResult run_prediction_comparison(const ExperimentConfig& cfg);
/// Eve's SINR for unknown, perfect and imperfect ECSI (fig1 scenario).
SweepResult run_ecsi_comparison(const ExperimentConfig& cfg);
/// Dispatches on cfg.scenario.
SweepResult run_scenario(const ExperimentConfig& cfg);

std::string library_version();

} // namespace wiretap

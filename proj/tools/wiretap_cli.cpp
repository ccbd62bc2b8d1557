#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wiretap/acceptance.hpp"
#include "wiretap/random.hpp"
#include "wiretap/report.hpp"
#include "wiretap/units.hpp"

namespace fs = std::filesystem;
using namespace wiretap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

// Flags shared by run/figure; kept as text and applied through the config keys.
struct Overrides {
    std::string config_file, na, nb, ne, target_db, sigma_db, gamma, trials, power_db, seed,
        schemes, threads, rho_policy;
    bool estimate_propagation = false;
};

void add_override_flags(CLI::App* app, Overrides& o) {
    app->add_option("--na", o.na, "Alice antennas (list or first:last[:step])");
    app->add_option("--nb", o.nb, "Bob antennas (defaults to na)");
    app->add_option("--ne", o.ne, "Eve antennas (defaults to na)");
    app->add_option("--target-sinr-db", o.target_db, "Bob's target SINR in dB (list or range)");
    app->add_option("--sigma-h-db", o.sigma_db, "CSI error level 10 log10(sigma_H^2) (list or range)");
    app->add_option("--gamma-ecsi", o.gamma, "Eve-CSI perturbation weight in [0, 1]");
    app->add_option("--trials", o.trials, "Monte Carlo trials per point");
    app->add_option("--power-db", o.power_db, "Total transmit power in dB");
    app->add_option("--seed", o.seed, "Master seed");
    app->add_option("--schemes", o.schemes, "Comma-separated schemes or 'all'");
    app->add_option("--threads", o.threads, "Worker threads (falls back to WIRETAP_THREADS)");
    app->add_option("--rho-policy", o.rho_policy, "requested | alice_estimate");
    app->add_flag("--strict-paper-eq38", o.estimate_propagation,
                  "FDD interference propagated through Alice's estimate");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& o) {
    const std::pair<const char*, const std::string*> pairs[] = {
        {"na", &o.na},
        {"nb", &o.nb},
        {"ne", &o.ne},
        {"target_sinr_db", &o.target_db},
        {"sigma_h_db", &o.sigma_db},
        {"gamma_ecsi", &o.gamma},
        {"trials", &o.trials},
        {"power_db", &o.power_db},
        {"seed", &o.seed},
        {"schemes", &o.schemes},
        {"rho_policy", &o.rho_policy},
    };
    for (const auto& [key, val] : pairs)
        if (!val->empty())
            apply_setting(cfg, key, *val);
    if (o.estimate_propagation)
        cfg.robust.estimate_propagation = true;
    if (!o.threads.empty())
        apply_setting(cfg, "threads", o.threads);
    else if (const char* env = std::getenv("WIRETAP_THREADS"); env && *env)
        apply_setting(cfg, "threads", env);
}

OutputFormat parse_format(const std::string& f) {
    if (f == "csv")
        return OutputFormat::csv;
    if (f == "json")
        return OutputFormat::json;
    throw ConfigError("--format must be csv or json");
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

int execute(const ExperimentConfig& cfg, const std::string& out_dir, const std::string& format) {
    const OutputFormat fmt = parse_format(format);
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult res = run_scenario(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory '" + out_dir + "': " + ec.message());
    const std::string stem(to_string(cfg.scenario));
    const fs::path results = fs::path(out_dir) / (stem + "_results." + format);
    const fs::path plot = fs::path(out_dir) / (stem + "_plot.csv");
    const fs::path man = fs::path(out_dir) / (stem + "_manifest.json");
    write_text(results, results_text(res, fmt));
    write_text(plot, plot_table(res));
    write_text(man, manifest(res, wall).dump(2) + "\n");
    std::printf("%zu points, %d trials each, %.2f s\n", res.points.size(), cfg.trials, wall);
    std::printf("results:  %s\nplot:     %s\nmanifest: %s\n", results.string().c_str(),
                plot.string().c_str(), man.string().c_str());
    return kExitOk;
}

struct PredictArgs {
    int na = 5, nb = 5;
    double sigma_h_db = -20.0, target_db = 20.0, power_db = 20.0;
    std::uint64_t seed = 1;
    int trials = 0;
};

int predict(const PredictArgs& a) {
    if (a.na < 1 || a.nb < 1)
        throw ConfigError("antenna counts must be ≥ 1");
    if (a.trials < 0)
        throw ConfigError("trials must be ≥ 0");
    const LinkBudget budget{1.0, 1.0, from_db(a.power_db)};
    const ChannelSet chan = generate_channels(a.na, a.nb, a.na, 1.0,
                                              stream_seed(a.seed, Stream::channel), budget);
    const SvdPartition svd = partition_svd(chan.h_ba);
    const CsiErrorModel err = CsiErrorModel::iid(from_db(a.sigma_h_db));
    const double target = from_db(a.target_db);
    if (a.nb > a.na)
        throw ConfigError("prediction needs na ≥ nb");
    const PerturbMoments m = compute_moments(svd, err);
    const NaivePrediction p = naive_prediction_terms(svd, m, chan, target);

    std::printf("channel           %d x %d, seed %llu\n", a.nb, a.na,
                static_cast<unsigned long long>(a.seed));
    std::printf("sigma_1           %.6g\n", svd.sigma1());
    std::printf("E{dsigma_1}       %.6g\n", m.e_dsigma1);
    std::printf("E{dsigma_1^2}     %.6g\n", m.e_dsigma1_sq);
    std::printf("E{v1^H dv1}       %.6g\n", m.e_v1_dv1.real());
    std::printf("target SINR       %.4f dB\n", a.target_db);
    std::printf("predicted naive   %.4f dB%s\n", to_db(p.sinr()),
                a.sigma_h_db > kPredictionValidityDb ? "  (extrapolated)" : "");
    if (a.trials > 0) {
        double sig = 0.0, inr = 0.0;
        for (int t = 0; t < a.trials; ++t) {
            const ChannelMatrix dh = sample_csi_error(
                err, a.nb, a.na, stream_seed(derive_seed(a.seed, static_cast<std::uint64_t>(t)),
                                             Stream::csi_error));
            const SinrReport r = simulate_naive(chan, svd, dh, target);
            sig += r.signal_b;
            inr += r.interference_noise_b;
        }
        std::printf("simulated naive   %.4f dB  (%d draws, ratio of means)\n", to_db(sig / inr),
                    a.trials);
    }
    return kExitOk;
}

int validate(const acceptance::Options& opts) {
    int failed = 0;
    acceptance::run_all(opts, [&](const acceptance::CheckResult& r) {
        std::printf("[%s] %d %s: %s (%.1f s)\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        failed += !r.passed;
    });
    std::printf("%s\n", failed ? "some checks failed" : "all checks passed");
    return failed ? kExitNumeric : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Artificial-noise MIMO wiretap simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());

    std::string out_dir = "results";
    std::string format = "csv";

    Overrides run_o;
    auto* run = app.add_subcommand("run", "Run an experiment from a config file and/or flags");
    run->add_option("--config", run_o.config_file, "key = value file or a JSON manifest");
    std::string scenario_name;
    run->add_option("--scenario", scenario_name, "fig1..fig5 or custom");
    add_override_flags(run, run_o);
    run->add_option("--out-dir", out_dir, "Output directory");
    run->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    Overrides fig_o;
    int figure_no = 0;
    auto* figure = app.add_subcommand("figure", "Run a preset scenario");
    figure->add_option("number", figure_no, "Figure number 1-5")->required()->check(CLI::Range(1, 5));
    add_override_flags(figure, fig_o);
    figure->add_option("--out-dir", out_dir, "Output directory");
    figure->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    PredictArgs pa;
    auto* pred = app.add_subcommand("predict", "Closed-form naive SINR for one random channel");
    pred->add_option("--na", pa.na, "Alice antennas");
    pred->add_option("--nb", pa.nb, "Bob antennas");
    pred->add_option("--sigma-h-db", pa.sigma_h_db, "CSI error level in dB");
    pred->add_option("--target-sinr-db", pa.target_db, "Target SINR in dB");
    pred->add_option("--power-db", pa.power_db, "Total transmit power in dB");
    pred->add_option("--seed", pa.seed, "Channel seed");
    pred->add_option("--trials", pa.trials, "Also simulate this many error draws");

    acceptance::Options vo;
    bool quick = false;
    auto* val = app.add_subcommand("validate", "Run the invariant and oracle checks");
    val->add_flag("--quick", quick, "Fewer trials and oracle draws");
    val->add_option("--threads", vo.threads, "Worker threads");
    val->add_option("--seed", vo.seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) {
            ExperimentConfig cfg;
            if (!run_o.config_file.empty())
                cfg = parse_config_text(read_file(run_o.config_file));
            if (!scenario_name.empty()) {
                const auto s = parse_scenario(scenario_name);
                if (!s)
                    throw ConfigError("unknown scenario '" + scenario_name + "'");
                if (run_o.config_file.empty())
                    cfg = ExperimentConfig::preset(*s);
                cfg.scenario = *s;
            }
            apply_overrides(cfg, run_o);
            return execute(cfg, out_dir, format);
        }
        if (*figure) {
            const Scenario scenarios[] = {Scenario::fig1_ne_sweep, Scenario::fig2_prediction,
                                          Scenario::fig3_sinr_vs_target, Scenario::fig4_secrecy,
                                          Scenario::fig5_sigma_sweep};
            ExperimentConfig cfg = ExperimentConfig::preset(scenarios[figure_no - 1]);
            apply_overrides(cfg, fig_o);
            return execute(cfg, out_dir, format);
        }
        if (*pred)
            return predict(pa);
        if (*val) {
            if (vo.threads == 0)
                if (const char* env = std::getenv("WIRETAP_THREADS"); env && *env)
                    vo.threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
            if (quick)
                vo = acceptance::Options::quick(vo);
            return validate(vo);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const OrientationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const ValidityRangeError& e) {
        std::fprintf(stderr, "numerical validity error: %s\n", e.what());
        return kExitNumeric;
    } catch (const IllConditionedError& e) {
        std::fprintf(stderr, "numerical validity error: %s\n", e.what());
        return kExitNumeric;
    } catch (const DegenerateChannelError& e) {
        std::fprintf(stderr, "numerical validity error: %s\n", e.what());
        return kExitNumeric;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumeric;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitOk;
}

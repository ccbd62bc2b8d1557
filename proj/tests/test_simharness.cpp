#include <gtest/gtest.h>

#include <cmath>

#include "wiretap/simharness.hpp"
#include "wiretap/units.hpp"

using namespace wiretap;

namespace {

ExperimentConfig small(int trials = 60) {
    ExperimentConfig c;
    c.na = {3};
    c.trials = trials;
    c.target_sinr_db = {10.0, 20.0};
    c.sigma_h_db = {-20.0};
    c.schemes = all_schemes();
    c.threads = 1;
    return c;
}

void expect_same(const SweepResult& a, const SweepResult& b) {
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        for (const auto& [s, st] : a.points[i].stats) {
            const SchemeStats& o = b.points[i].stats.at(s);
            EXPECT_EQ(st.roe_b.mean, o.roe_b.mean);
            EXPECT_EQ(st.roe_e.mean, o.roe_e.mean);
            EXPECT_EQ(st.sinr_b.mean, o.sinr_b.mean);
            EXPECT_EQ(st.secrecy.mean, o.secrecy.mean);
            EXPECT_EQ(st.secrecy.stderr_, o.secrecy.stderr_);
        }
}

} // namespace

TEST(Names, RoundTrip) {
    for (Scheme s : all_schemes())
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    for (Scenario s : {Scenario::fig1_ne_sweep, Scenario::fig2_prediction, Scenario::fig3_sinr_vs_target,
                       Scenario::fig4_secrecy, Scenario::fig5_sigma_sweep, Scenario::custom})
        EXPECT_EQ(parse_scenario(to_string(s)), s);
    EXPECT_EQ(parse_scenario("fig3"), Scenario::fig3_sinr_vs_target);
    EXPECT_FALSE(parse_scheme("bogus").has_value());
}

TEST(Harness, DeterministicAcrossThreadCounts) {
    ExperimentConfig c = small();
    const SweepResult one = run_experiment(c);
    c.threads = 3;
    const SweepResult three = run_experiment(c);
    c.threads = 7;
    const SweepResult seven = run_experiment(c);
    expect_same(one, three);
    expect_same(one, seven);
}

TEST(Harness, SeedChangesResults) {
    ExperimentConfig c = small();
    const SweepResult a = run_experiment(c);
    c.master_seed = 43;
    const SweepResult b = run_experiment(c);
    EXPECT_NE(a.points[0].stats.at(Scheme::naive).roe_b.mean, b.points[0].stats.at(Scheme::naive).roe_b.mean);
}

TEST(Harness, SingleTrialPerfectHitsTarget) {
    ExperimentConfig c;
    c.trials = 1;
    c.sigma_h_db = {0.0};
    c.schemes = {Scheme::perfect};
    const SweepResult r = run_experiment(c);
    const SchemeStats& st = r.points[0].stats.at(Scheme::perfect);
    if (st.outages == 0)
        EXPECT_NEAR(st.sinr_b.mean, 100.0, 1e-7);
}

TEST(Harness, GridAndAxis) {
    ExperimentConfig c = small(5);
    c.sigma_h_db = {-30.0, -20.0, -10.0};
    c.target_sinr_db = {20.0};
    const SweepResult r = run_experiment(c);
    EXPECT_EQ(r.axis_name, "sigma_h_db");
    ASSERT_EQ(r.axis.size(), 3u);
    EXPECT_EQ(r.axis[2], -10.0);
    EXPECT_EQ(r.points.size(), 3u);
}

TEST(Harness, ExtrapolationFlag) {
    ExperimentConfig c = ExperimentConfig::preset(Scenario::fig2_prediction);
    c.na = {2};
    c.trials = 20;
    c.sigma_h_db = {-20.0, -5.0};
    const SweepResult r = run_prediction_comparison(c);
    EXPECT_FALSE(r.points[0].extrapolated);
    EXPECT_TRUE(r.points[1].extrapolated);
}

TEST(Harness, VanishingErrorPredictionEqualsTarget) {
    ExperimentConfig c = ExperimentConfig::preset(Scenario::fig2_prediction);
    c.trials = 200;
    c.sigma_h_db = {-60.0};
    const SweepResult r = run_prediction_comparison(c);
    for (const SweepPoint& p : r.points) {
        EXPECT_NEAR(to_db(p.stats.at(Scheme::naive).roe_b.mean), 20.0, 0.05);
        EXPECT_NEAR(to_db(p.stats.at(Scheme::analytic_naive).roe_b.mean), 20.0, 0.05);
    }
}

TEST(Harness, PerfectCsiReferenceIsIndependentOfSigma) {
    ExperimentConfig c = small(30);
    c.schemes = {Scheme::perfect};
    c.sigma_h_db = {-30.0, 0.0};
    const SweepResult r = run_experiment(c);
    EXPECT_EQ(r.points[0].stats.at(Scheme::perfect).roe_e.mean, r.points[1].stats.at(Scheme::perfect).roe_e.mean);
}

TEST(Harness, NaiveDegradesWithError) {
    ExperimentConfig c = small(300);
    c.schemes = {Scheme::naive};
    c.target_sinr_db = {20.0};
    c.sigma_h_db = {-25.0, -15.0};
    const SweepResult r = run_experiment(c);
    EXPECT_GT(r.points[0].stats.at(Scheme::naive).roe_b.mean, r.points[1].stats.at(Scheme::naive).roe_b.mean);
}

TEST(Harness, SecrecyNeverNegative) {
    const SweepResult r = run_experiment(small(40));
    for (const SweepPoint& p : r.points)
        for (const auto& [s, st] : p.stats)
            if (s != Scheme::analytic_naive)
                EXPECT_GE(st.secrecy.mean, 0.0);
}

TEST(Harness, OutagePoint) {
    ExperimentConfig c = small(20);
    c.target_sinr_db = {60.0};
    const SweepResult r = run_experiment(c);
    EXPECT_EQ(r.points[0].stats.at(Scheme::perfect).outages, 20);
}

TEST(Validate, RejectsBadConfigs) {
    auto bad = [](auto mutate) {
        ExperimentConfig c;
        mutate(c);
        EXPECT_THROW(c.validate(), ConfigError);
    };
    bad([](ExperimentConfig& c) { c.trials = 0; });
    bad([](ExperimentConfig& c) { c.na.clear(); });
    bad([](ExperimentConfig& c) { c.na = {0}; });
    bad([](ExperimentConfig& c) { c.gamma_ecsi = 1.5; });
    bad([](ExperimentConfig& c) { c.sigma_b_sq = 0.0; });
    bad([](ExperimentConfig& c) { c.sigma_h_db = {NAN}; });
    bad([](ExperimentConfig& c) { c.target_sinr_db = {INFINITY}; });
    bad([](ExperimentConfig& c) { c.schemes = {Scheme::naive, Scheme::naive}; });
    bad([](ExperimentConfig& c) {
        c.nb = {6};
        c.schemes = {Scheme::robust_tdd};
    });
    ExperimentConfig ok;
    ok.sigma_h_db = {-INFINITY};
    EXPECT_NO_THROW(ok.validate());
}

TEST(Validate, TrialsMessage) {
    ExperimentConfig c;
    c.trials = 0;
    try {
        c.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("trials must be"), std::string::npos);
    }
}

TEST(Presets, FigureDefaults) {
    const ExperimentConfig f1 = ExperimentConfig::preset(Scenario::fig1_ne_sweep);
    EXPECT_EQ(f1.ne.size(), 20u);
    EXPECT_TRUE(f1.has(Scheme::known_ecsi));
    const ExperimentConfig f3 = ExperimentConfig::preset(Scenario::fig3_sinr_vs_target);
    EXPECT_EQ(f3.sigma_h_db, std::vector<double>{-10.0});
    EXPECT_EQ(f3.trials, 3000);
    const ExperimentConfig f5 = ExperimentConfig::preset(Scenario::fig5_sigma_sweep);
    EXPECT_GT(f5.sigma_h_db.size(), 5u);
}

TEST(Presets, Fig3NaiveGap) {
    ExperimentConfig c = ExperimentConfig::preset(Scenario::fig3_sinr_vs_target);
    c.trials = 1000;
    c.target_sinr_db = {15.0, 20.0};
    c.schemes = {Scheme::naive};
    const SweepResult r = run_scenario(c);
    for (const SweepPoint& p : r.points) {
        const double gap = p.target_sinr_db - to_db(p.stats.at(Scheme::naive).roe_b.mean);
        EXPECT_GT(gap, 13.5);
        EXPECT_LT(gap, 18.5);
    }
}

TEST(Presets, Fig1KnownEcsiSilencesEve) {
    ExperimentConfig c = ExperimentConfig::preset(Scenario::fig1_ne_sweep);
    c.na = {4};
    c.ne = {1, 2, 3};
    c.trials = 100;
    const SweepResult r = run_ecsi_comparison(c);
    for (const SweepPoint& p : r.points)
        EXPECT_LT(p.stats.at(Scheme::known_ecsi).roe_e.mean, from_db(-40.0));
}

#pragma once

// End-to-end checks of the simulator against the reference behaviour, shared
// by the acceptance test binary and `wiretap validate`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wiretap::acceptance {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    int trials = 3000;
    int exactness_channels = 1000;
    int oracle_draws = 400000;
    std::uint64_t seed = 20240917;
    unsigned threads = 0;

    /// Same checks with fewer samples; tolerances are not relaxed, so
    /// statistical checks may fail.
    static Options quick(Options base) {
        base.trials = 300;
        base.exactness_channels = 200;
        base.oracle_draws = 40000;
        return base;
    }
};

CheckResult perfect_csi_exactness(const Options& o);
CheckResult orthogonality(const Options& o);
CheckResult prediction_accuracy(const Options& o);
CheckResult sinr_vs_target(const Options& o);
CheckResult secrecy_behaviour(const Options& o);
CheckResult sigma_sweep(const Options& o);
CheckResult ecsi_comparison(const Options& o);
CheckResult moment_oracle(const Options& o);
CheckResult degenerate_identities(const Options& o);

/// Runs all nine checks in order, reporting each as soon as it finishes.
std::vector<CheckResult> run_all(const Options& o,
                                 const std::function<void(const CheckResult&)>& on_result = {});

} // namespace wiretap::acceptance

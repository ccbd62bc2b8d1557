// Runs the nine end-to-end criteria and prints one line per criterion.

#include <cstdio>
#include <cstdlib>

#include "wiretap/acceptance.hpp"

int main() {
    wiretap::acceptance::Options opts;
    if (const char* t = std::getenv("WIRETAP_THREADS"))
        opts.threads = static_cast<unsigned>(std::atoi(t));
    int failed = 0;
    wiretap::acceptance::run_all(opts, [&](const wiretap::acceptance::CheckResult& r) {
        std::printf("criterion %d %s: %s | %s (%.1f s)\n", r.id, r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    });
    std::printf("%d of 9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}

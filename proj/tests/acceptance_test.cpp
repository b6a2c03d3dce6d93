// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include "hermlab/verify.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>

int main() {
    using Clock = std::chrono::steady_clock;
    bool all = true;
    for (const char* suite : {"densities", "analytic", "groups", "assembly", "weil"}) {
        auto t0 = Clock::now();
        auto results = hermlab::verify::run_suite(suite);
        auto elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
        for (const auto& r : results) {
            all = all && r.passed;
            std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name
                      << "  [" << r.detail << "]" << std::endl;
        }
        std::cout << "  (" << suite << " suite: " << std::fixed << std::setprecision(1) << elapsed
                  << "s)" << std::endl;
    }
    std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES present") << std::endl;
    return all ? 0 : 1;
}

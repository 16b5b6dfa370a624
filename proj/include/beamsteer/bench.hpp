#pragma once

#include <string>
#include <vector>

// Control-step cost measurements, compared against the published controller
// timing table (control computation 0.002 ms on the original hardware).

namespace beamsteer::bench {

struct BenchResult {
    std::string name;
    double median_us = 0.0;  // median per-call cost
    std::size_t calls = 0;
    double reference_ms = -1.0;  // published value; < 0 when none applies
};

// Warmed-up medians over >= 1e5 calls each.
std::vector<BenchResult> run_benchmarks();

std::string bench_report();

}  // namespace beamsteer::bench

#pragma once

#include <string>
#include <vector>

// Property/invariant suites behind `beamsteer check`: fast randomized
// verification of the geometric identities the controllers rely on.

namespace beamsteer::checks {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // worst observed value vs bound
    double seconds = 0.0;
};

std::vector<CheckResult> run_all(std::uint64_t seed = 20240914);

}  // namespace beamsteer::checks

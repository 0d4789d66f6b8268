#pragma once

#include <string>
#include <vector>

namespace dms {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

enum class VerifyLevel { Quick, Full };

// Runs the library's invariant suite (the checks behind `dms verify`).
// Quick keeps every check under a few seconds; Full adds the large
// propagator matrix, the 50-field space-time-bound corpus and the
// minimizer-based checks.
std::vector<CheckResult> run_verify(VerifyLevel level);

}  // namespace dms

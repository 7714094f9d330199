#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace rulerkit {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail; // failure description, empty on pass
};

// Randomized property checks over every library invariant. Deterministic for
// a fixed seed.
std::vector<CheckResult> run_checks(std::uint64_t seed);

// Prints one PASS/FAIL line per check plus a summary; returns true iff all
// checks passed.
bool run_checks(std::uint64_t seed, std::ostream& out);

inline constexpr std::uint64_t kDefaultCheckSeed = 20250810;

} // namespace rulerkit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlab/scenarios.hpp"

namespace qlab::acceptance {

// Outcome of one acceptance criterion: a hard pass/fail plus the measured
// numbers that justify it and the wall-clock cost.
struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double elapsed_seconds = 0.0;
};

// Runs the full acceptance suite in order. Every stochastic sub-task derives
// its stream from (seed, task label), so results are reproducible and
// independent of execution order.
std::vector<CriterionResult> run_all(std::uint64_t seed = 20260814);

bool all_pass(const std::vector<CriterionResult>& results);

// One line per criterion: index, name, PASS/FAIL, elapsed, detail.
std::string summary_lines(const std::vector<CriterionResult>& results);

// The suite as a report: one quantity per criterion (1 = pass), details and
// timings carried as notes.
scenarios::ScenarioReport as_report(const std::vector<CriterionResult>& results);

} // namespace qlab::acceptance

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sopq {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the acceptance grid, printing one PASS/FAIL line per criterion as it
// finishes plus INFO lines for reported-only observations.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

// Path of the in-repository discrepancy ledger.
std::string discrepancy_ledger_path();

} // namespace sopq

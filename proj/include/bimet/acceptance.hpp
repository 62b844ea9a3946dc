#pragma once

#include <string>
#include <vector>

namespace bimet {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0;
    double time_limit = 0;
    std::string detail;
};

struct AcceptanceOptions {
    std::string golden_path; // empty: the bundled data/golden.txt
    std::vector<std::string> only; // criterion names; empty runs all
};

// Names in criterion order: graev, fingen, axioms, keylemma2, keylemma4, separation,
// approx-n, approx-q, amalgam, chain, bnf, katetov.
const std::vector<std::string>& criterion_names();

// Throws Error on an unknown name in options.only.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

std::string default_golden_path();

} // namespace bimet

// check.hpp — the oracle-equivalence harness: enumerates formulae and
// traces within bounds, monitors each pair and compares the verdict
// against brute-force FLTL evaluation.  This is what pins the
// reconstructed evaluation tables.

#ifndef RULEMON_CHECK_HPP
#define RULEMON_CHECK_HPP

#include <functional>
#include <string>
#include <vector>

#include "rulemon/engine.hpp"
#include "rulemon/rulegen.hpp"

namespace rulemon {

struct CheckOptions {
    int max_nodes = 5;
    int max_len = 3;
    std::vector<std::string> alphabet = {"a", "b"};
    int horizon = 3;               // extension horizon for early verdicts
    long long formula_budget = 5'000'000;
    int threads = 1;
    bool check_single_pass = true;
    bool check_early_stop = true;
    bool check_map_chains = false;  // Theorem-1 chains, see mapsem
    int max_samples = 20;
    // test hook: corrupts each rule system before monitoring
    std::function<void(RuleSystem&)> saboteur;
};

struct CheckReport {
    long long formulas = 0;
    long long pairs = 0;                    // (formula, trace) verdict comparisons
    long long mismatches = 0;               // wrong or failed verdicts
    long long early_verdicts = 0;
    long long early_stop_violations = 0;    // early verdict not extension-invariant
    long long single_pass_divergences = 0;  // single pass != fixpoint on a cell
    long long map_chain_steps = 0;
    long long map_chain_violations = 0;
    std::vector<std::string> samples;       // a few failing cases, for humans

    bool clean() const {
        return mismatches == 0 && early_stop_violations == 0 && single_pass_divergences == 0 &&
               map_chain_violations == 0;
    }
};

CheckReport run_equivalence_check(const CheckOptions& options);

std::string format_report(const CheckReport& report);

}  // namespace rulemon

#endif

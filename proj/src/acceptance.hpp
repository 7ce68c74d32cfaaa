#pragma once

#include <set>
#include <string>
#include <vector>

namespace sst {

struct CheckResult {
    std::string id;  // "1".."13" for criteria, a short name for probes
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

struct AcceptanceOptions {
    int threads = 4;
    bool fail_fast = false;
    // Criterion ids to run; empty runs all of them and the probes.
    std::set<int> only;
};

struct AcceptanceReport {
    std::vector<CheckResult> criteria;
    // Empirical checks that stand in for the claims a finite computation
    // cannot prove. They must succeed but prove nothing.
    std::vector<CheckResult> probes;

    bool all_passed() const;
    std::vector<std::string> failed_ids() const;
    // One line per check: `criterion <id> PASS|FAIL <title>: <detail>`.
    std::string table() const;
};

AcceptanceReport run_acceptance(const AcceptanceOptions& opts = {});

}  // namespace sst

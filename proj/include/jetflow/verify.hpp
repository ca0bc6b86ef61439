#pragma once

// Verification suites: each runs the named family of theorem checks against
// a problem and reports per-check tolerances and measured values. Checks are
// independent and may fan out across worker threads.

#include <iosfwd>
#include <string>
#include <vector>

#include "jetflow/problem.hpp"

namespace jetflow {

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double measured = 0.0;
    bool pass = false;
    std::string note; // optional context (e.g. "ratio", sample counts)
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct VerifyReport {
    std::string problem;
    std::vector<SuiteReport> suites;
    bool pass() const {
        for (const auto& s : suites)
            if (!s.pass()) return false;
        return true;
    }
};

enum class Suite { Prolongation, Variational, Hamilton, Forms, All };

Suite parse_suite(const std::string& name);

/// Runs the suite(s); `workers` <= 1 means sequential. Worker count does not
/// affect results, only scheduling.
VerifyReport run_verify(const Problem& pr, Suite suite, std::size_t workers = 1);

void write_report_json(std::ostream& os, const VerifyReport& report);

/// Worker-count default: the JETFLOW_WORKERS environment variable, else 1.
std::size_t default_worker_count();

} // namespace jetflow

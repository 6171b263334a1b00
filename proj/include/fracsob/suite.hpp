#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracsob/report.hpp"

namespace fracsob::suite {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;              // one-line summary of what was checked
    std::vector<report::Row> rows;   // per-check data for the report
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
    double seconds = 0.0;
};

/// Runs the full acceptance suite. Criteria 1-10 are evaluated once with the
/// given seed; the reproducibility criterion re-runs them and byte-compares
/// the deterministic serializations.
SuiteResult run_acceptance(std::uint64_t seed);

/// Deterministic serialization of every row (no timings, no timestamps);
/// two runs with the same seed must produce identical bytes.
std::string deterministic_serialization(const SuiteResult& result);

/// One "[PASS]/[FAIL] criterion <id>: <name> -- <detail>" line per criterion.
std::string format_lines(const SuiteResult& result, bool with_timing);

}  // namespace fracsob::suite

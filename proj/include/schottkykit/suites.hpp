#pragma once
// Named verification suites behind the `verify` command. Every check is
// deterministic in (seed, precision); the effective configuration is echoed
// into the report, and any failed check makes the report (and the process)
// fail.

#include "schottkykit/jsonio.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace skt::suites {

struct SuiteConfig {
    std::string suite = "all";  // core | eigen | identities | schottky | poincare | all
    std::vector<int> genus;     // empty = per-suite defaults
    int precision = 40;
    int guard = 10;
    std::uint64_t seed = 1;
    double tolerance_scale = 1.0;  // multiplies every tolerance
    std::string out;
    int jobs = 0;  // 0 = library default (OMP_NUM_THREADS)
    bool deep = false;
    std::uint64_t branch_seed = 1;
};

struct CheckResult {
    std::string name;
    int genus = 0;
    std::string inputs_digest;  // seed/genus/precision fingerprint of the inputs
    std::string metric_kind;    // "residual" | "rank" | "slope" | "count" | "exact"
    double metric = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double wall_ms = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::string tool_version;
    SuiteConfig config;
    std::vector<CheckResult> checks;
    double total_wall_ms = 0.0;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline const char* kToolVersion = "schottkykit 1.0.0";

VerificationReport run_suite(const SuiteConfig& cfg);

jsonio::json report_to_json(const VerificationReport& rep, bool include_timings = true);

}  // namespace skt::suites

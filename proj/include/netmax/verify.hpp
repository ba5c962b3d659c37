#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace netmax {

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    double lp_margin = 1e-6;
    uint64_t seed = 1;
    int lemma_instances = 200; // feasible LP policies required by the lemma suite
    bool quick = false;        // trims seed counts for smoke runs
};

// Runtime property suites behind the `verify` subcommand.
//   policy: gossip-matrix lemmas, eigensolver cross-check, search properties
//   bounds: update-rule equivalences, fixed points, theorem-bound traces
std::vector<PropertyResult> verify_policy_suite(const VerifyOptions& opts);
std::vector<PropertyResult> verify_bounds_suite(const VerifyOptions& opts);
std::vector<PropertyResult> run_verify(const std::string& suite, const VerifyOptions& opts);

} // namespace netmax

#pragma once

#include <optional>

#include "netmax/matrix.hpp"
#include "netmax/policy.hpp"
#include "netmax/topology.hpp"

namespace netmax {

struct PolicySearchParams {
    double alpha = 0.1;
    int outer_rounds = 16; // K: rho grid
    int inner_rounds = 16; // R: t̄ grid
    double epsilon = 0.01;
    double margin = 1e-6;
};

// Nested grid search over (ρ, t̄): for each grid point solve the LP, build the
// gossip expectation, evaluate λ₂ and T = t̄·lnε/lnλ₂, and return the candidate
// minimizing T (ties: smaller λ₂, then smaller ρ, then smaller t̄).
// nullopt when every grid point is infeasible.
//
// The OpenMP variant evaluates grid points in parallel; candidates are reduced
// serially in grid order, so the result is identical to the serial reference.
std::optional<PolicyResult> generate_policy_matrix(const PolicySearchParams& params,
                                                   const Matrix& times, const Topology& topo);

// Serial reference implementation, kept for testing and benchmarking.
std::optional<PolicyResult> generate_policy_matrix_serial(const PolicySearchParams& params,
                                                          const Matrix& times,
                                                          const Topology& topo);

} // namespace netmax

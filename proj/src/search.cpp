#include "netmax/search.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "netmax/eigen.hpp"
#include "netmax/errors.hpp"

namespace netmax {

namespace {

struct Candidate {
    bool feasible = false;
    PolicyResult result;
};

// Evaluate one (ρ, t̄) grid point. Infeasible LPs and degenerate spectra are
// reported as infeasible candidates rather than errors.
Candidate evaluate_grid_point(const PolicySearchParams& params, double rho, double tbar,
                              const Matrix& times, const Topology& topo) {
    Candidate cand;
    auto policy = solve_policy_lp(params.alpha, rho, tbar, times, topo, params.margin);
    if (!policy) return cand;
    try {
        const auto gossip = build_gossip_expectation(*policy, params.alpha, rho, topo);
        const double lambda2 = second_largest_eigenvalue(gossip);
        const double t_conv = convergence_time(tbar, lambda2, params.epsilon);
        if (!std::isfinite(t_conv)) return cand;
        cand.feasible = true;
        cand.result = {std::move(*policy), rho, tbar, lambda2, t_conv};
    } catch (const error&) {
        // degenerate grid point (zero-probability edge, stalled eigensolve):
        // treated as infeasible rather than aborting the search
        cand.feasible = false;
    }
    return cand;
}

// (min T, then min λ₂, then min ρ, then min t̄); deterministic given inputs.
bool better(const PolicyResult& a, const PolicyResult& b) {
    if (a.t_convergence != b.t_convergence) return a.t_convergence < b.t_convergence;
    if (a.lambda2 != b.lambda2) return a.lambda2 < b.lambda2;
    if (a.rho != b.rho) return a.rho < b.rho;
    return a.tbar < b.tbar;
}

std::optional<PolicyResult> reduce(std::vector<Candidate>& grid) {
    std::optional<PolicyResult> best;
    for (auto& cand : grid) {
        if (!cand.feasible) continue;
        if (!best || better(cand.result, *best)) best = std::move(cand.result);
    }
    return best;
}

} // namespace

std::optional<PolicyResult> generate_policy_matrix_serial(const PolicySearchParams& params,
                                                          const Matrix& times,
                                                          const Topology& topo) {
    if (params.outer_rounds < 1 || params.inner_rounds < 1)
        throw error(errc::config_invalid, "search rounds must be >= 1");
    const auto [rho_low, rho_high] = rho_interval(params.alpha);
    const int k_rounds = params.outer_rounds;
    const int r_rounds = params.inner_rounds;
    std::vector<Candidate> grid(static_cast<size_t>(k_rounds) * r_rounds);
    for (int k = 1; k <= k_rounds; ++k) {
        const double rho = rho_low + k * (rho_high - rho_low) / k_rounds;
        const auto intervals = feasible_intervals(params.alpha, rho, times, topo);
        if (intervals.tbar_empty()) continue; // no feasible t̄ at this rho
        const double lo = intervals.tbar_low, hi = intervals.tbar_high;
        for (int r = 1; r <= r_rounds; ++r) {
            const double tbar = lo + r * (hi - lo) / r_rounds;
            grid[static_cast<size_t>(k - 1) * r_rounds + (r - 1)] =
                evaluate_grid_point(params, rho, tbar, times, topo);
        }
    }
    return reduce(grid);
}

std::optional<PolicyResult> generate_policy_matrix(const PolicySearchParams& params,
                                                   const Matrix& times, const Topology& topo) {
    if (params.outer_rounds < 1 || params.inner_rounds < 1)
        throw error(errc::config_invalid, "search rounds must be >= 1");
    const auto [rho_low, rho_high] = rho_interval(params.alpha);
    const int k_rounds = params.outer_rounds;
    const int r_rounds = params.inner_rounds;
    const int total = k_rounds * r_rounds;
    std::vector<Candidate> grid(static_cast<size_t>(total));

#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < total; ++idx) {
        const int k = idx / r_rounds + 1;
        const int r = idx % r_rounds + 1;
        const double rho = rho_low + k * (rho_high - rho_low) / k_rounds;
        const auto intervals = feasible_intervals(params.alpha, rho, times, topo);
        if (intervals.tbar_empty()) continue;
        const double tbar = intervals.tbar_low + r * (intervals.tbar_high - intervals.tbar_low) / r_rounds;
        grid[idx] = evaluate_grid_point(params, rho, tbar, times, topo);
    }
    return reduce(grid);
}

} // namespace netmax

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "netmax/matrix.hpp"
#include "netmax/topology.hpp"

namespace netmax {

// E[(D^k)ᵀ D^k] for a feasible policy; lambda2 of y governs convergence.
struct GossipExpectation {
    Matrix y;
    double alpha = 0.0;
    double rho = 0.0;
};

struct FeasibleIntervals {
    double rho_low = 0.0;
    double rho_high = 0.0;
    double tbar_low = 0.0;  // L
    double tbar_high = 0.0; // U
    bool tbar_empty() const { return tbar_low > tbar_high; }
};

struct PolicyResult {
    Matrix policy;
    double rho = 0.0;
    double tbar = 0.0;
    double lambda2 = 0.0;
    double t_convergence = 0.0;
};

// Per-constraint diagnostic for a policy against the feasibility system.
struct FeasibilityReport {
    bool row_stochastic = true;
    bool edge_support = true;   // zero off the edge set
    bool lower_bounds = true;   // p >= alpha*rho*(d+d) + margin on edges
    bool equal_iteration_times = true;
    double worst_row_sum_violation = 0.0;
    double worst_support_violation = 0.0;
    double worst_lower_bound_violation = 0.0;
    double worst_time_violation = 0.0; // relative spread of t̄_i
    bool all_pass() const { return row_stochastic && edge_support && lower_bounds && equal_iteration_times; }
};

// Feasible coupling weights: (0, 0.5/alpha]. Throws NonPositiveAlpha.
std::pair<double, double> rho_interval(double alpha);

// Bounds on the global average iteration time t̄ for a given rho:
//   L = max_i (αρ/M) Σ_m t_{i,m} (d_{i,m}+d_{m,i})
//   U = min_i (1/M) max_m t_{i,m} d_{i,m}
// L > U means no feasible t̄ exists for this rho.
std::pair<double, double> tbar_interval(double alpha, double rho, const Matrix& times,
                                        const Topology& topo);

// Both interval computations combined for one (alpha, rho) pair.
FeasibleIntervals feasible_intervals(double alpha, double rho, const Matrix& times,
                                     const Topology& topo);

// min Σ_i p_{i,i} subject to per-row expected-time equality Σ_m t p d = M t̄,
// row stochasticity, zero support off edges and p >= αρ(d+d)+margin on edges.
// Among the optimal solutions the minimum-norm one is returned, which makes
// the result unique and spreads probability evenly across equivalent links.
// nullopt = infeasible; NumericalFailure if the solver hits its iteration cap.
std::optional<Matrix> solve_policy_lp(double alpha, double rho, double tbar, const Matrix& times,
                                      const Topology& topo, double margin = 1e-6);

// Entrywise construction of E[(D^k)ᵀD^k] with γ_{i,m} = (d_{i,m}+d_{m,i})/(2 p_{i,m})
// and the equalized global-step probability p_i = 1/M that feasibility implies.
// Throws ZeroProbabilityEdge if an edge carries zero probability.
GossipExpectation build_gossip_expectation(const Matrix& policy, double alpha, double rho,
                                           const Topology& topo);

// t̄ ln(ε) / ln(λ₂); +infinity for degenerate λ₂ outside (0,1) so the grid
// search never selects such a candidate.
double convergence_time(double tbar, double lambda2, double epsilon);

FeasibilityReport check_feasibility(const Matrix& policy, double alpha, double rho,
                                    const Matrix& times, const Topology& topo,
                                    double margin = 1e-6);

// t̄_i = Σ_m t p d and p_i = (1/t̄_i) / Σ_m (1/t̄_m).
std::vector<double> expected_selection_probabilities(const Matrix& policy, const Matrix& times,
                                                     const Topology& topo);

// (U/L) · (ln(M−1)−ln(M−3)) / (ln(1−2a+a^M)−ln(1−2a+a^{M+1})), the search's
// approximation-ratio bound on fully connected heterogeneous networks.
double approximation_ratio_bound(int m_nodes, double a, double upper, double lower);

} // namespace netmax

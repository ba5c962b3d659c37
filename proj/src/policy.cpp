#include "netmax/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "netmax/errors.hpp"
#include "netmax/simplex.hpp"

namespace netmax {

namespace {

// Minimum-norm completion of one policy row: minimize Σ p_m² over the
// neighbors subject to Σ p_m = mass, Σ t_m p_m = time_target, p_m >= floor_m.
// Strictly convex with two equality constraints; solved by an active-set loop
// on the KKT system p_m = (ν0 + ν1 t_m)/2 clipped at the floors.
std::optional<std::vector<double>> min_norm_row(const std::vector<double>& t,
                                                const std::vector<double>& floor, double mass,
                                                double time_target) {
    const int n = static_cast<int>(t.size());
    std::vector<char> at_floor(n, 0);
    std::vector<double> p(n, 0.0);
    for (int guard = 0; guard <= 2 * n + 2; ++guard) {
        double fixed_mass = 0.0, fixed_time = 0.0;
        int free_count = 0;
        // Accumulate KKT normal equations over the free set.
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (int m = 0; m < n; ++m) {
            if (at_floor[m]) {
                fixed_mass += floor[m];
                fixed_time += t[m] * floor[m];
            } else {
                ++free_count;
                s0 += 1.0;
                s1 += t[m];
                s2 += t[m] * t[m];
            }
        }
        const double b0 = mass - fixed_mass;
        const double b1 = time_target - fixed_time;
        double nu0 = 0.0, nu1 = 0.0;
        if (free_count == 0) {
            // Everything pinned; feasible only if the equalities already hold.
            if (std::fabs(b0) > 1e-8 || std::fabs(b1) > 1e-8 * std::max(1.0, std::fabs(time_target)))
                return std::nullopt;
        } else {
            const double det = s0 * s2 - s1 * s1;
            if (std::fabs(det) < 1e-14 * std::max(1.0, s2)) {
                // Times equal across the free set: only the mass constraint binds.
                if (std::fabs(s1 / s0 * b0 - b1) > 1e-7 * std::max(1.0, std::fabs(time_target)))
                    return std::nullopt;
                nu0 = b0 / s0;
                nu1 = 0.0;
            } else {
                nu0 = (s2 * b0 - s1 * b1) / det;
                nu1 = (s0 * b1 - s1 * b0) / det;
            }
        }
        bool clipped = false;
        for (int m = 0; m < n; ++m) {
            if (at_floor[m]) {
                p[m] = floor[m];
                continue;
            }
            p[m] = nu0 + nu1 * t[m];
            if (p[m] < floor[m] - 1e-12) {
                at_floor[m] = 1;
                clipped = true;
            }
        }
        if (clipped) continue;
        // Release pinned entries whose multiplier went negative.
        bool released = false;
        for (int m = 0; m < n; ++m) {
            if (!at_floor[m]) continue;
            const double unconstrained = nu0 + nu1 * t[m];
            if (unconstrained > floor[m] + 1e-12) {
                at_floor[m] = 0;
                released = true;
            }
        }
        if (!released) return p;
    }
    return std::nullopt;
}

} // namespace

std::pair<double, double> rho_interval(double alpha) {
    if (alpha <= 0.0) throw error(errc::non_positive_alpha, "learning rate must be positive");
    return {0.0, 0.5 / alpha};
}

std::pair<double, double> tbar_interval(double alpha, double rho, const Matrix& times,
                                        const Topology& topo) {
    const int n = topo.nodes;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double li = 0.0;
        double slowest = 0.0;
        for (int m = 0; m < n; ++m) {
            if (!topo.edge(i, m)) continue;
            li += times(i, m) * 2.0; // d_{i,m} + d_{m,i} = 2 on undirected edges
            slowest = std::max(slowest, times(i, m));
        }
        lower = std::max(lower, alpha * rho / n * li);
        upper = std::min(upper, slowest / n);
    }
    return {lower, upper};
}

FeasibleIntervals feasible_intervals(double alpha, double rho, const Matrix& times,
                                     const Topology& topo) {
    FeasibleIntervals out;
    const auto [rho_low, rho_high] = rho_interval(alpha);
    out.rho_low = rho_low;
    out.rho_high = rho_high;
    const auto [lo, hi] = tbar_interval(alpha, rho, times, topo);
    out.tbar_low = lo;
    out.tbar_high = hi;
    return out;
}

std::optional<Matrix> solve_policy_lp(double alpha, double rho, double tbar, const Matrix& times,
                                      const Topology& topo, double margin) {
    const int n = topo.nodes;
    Matrix policy(n, n, 0.0);
    const double target = n * tbar; // Eq. t̄_i = M t̄

    for (int i = 0; i < n; ++i) {
        const auto nbrs = topo.neighbors(i);
        const int k = static_cast<int>(nbrs.size());
        std::vector<double> t(k), floor(k);
        for (int j = 0; j < k; ++j) {
            t[j] = times(i, nbrs[j]);
            floor[j] = std::max(0.0, 2.0 * alpha * rho + margin);
        }

        // Row LP in shifted variables q = p - floor >= 0 plus the self slack s:
        //   min s   s.t. Σ t q = target - Σ t·floor,  Σ q + s = 1 - Σ floor.
        double floor_mass = 0.0, floor_time = 0.0;
        for (int j = 0; j < k; ++j) {
            floor_mass += floor[j];
            floor_time += t[j] * floor[j];
        }
        std::vector<std::vector<double>> a(2, std::vector<double>(k + 1, 0.0));
        std::vector<double> b(2), c(k + 1, 0.0);
        for (int j = 0; j < k; ++j) {
            a[0][j] = t[j];
            a[1][j] = 1.0;
        }
        a[1][k] = 1.0;
        b[0] = target - floor_time;
        b[1] = 1.0 - floor_mass;
        c[k] = 1.0;
        if (b[1] < -1e-12) return std::nullopt; // floors alone exceed the row budget

        const LpSolution sol = solve_lp_equality(a, b, c);
        if (sol.status == LpStatus::iteration_limit)
            throw error(errc::numerical_failure, "simplex hit its iteration cap");
        if (sol.status != LpStatus::optimal) return std::nullopt;

        // Fix the optimal self-selection slack, then take the minimum-norm
        // point of the remaining optimal face so equivalent links share mass
        // evenly (unique, deterministic solution).
        const double self_prob = std::max(0.0, sol.objective);
        const auto row = min_norm_row(t, floor, 1.0 - self_prob, target);
        if (!row) {
            // Degenerate tolerance corner; fall back to the simplex vertex.
            for (int j = 0; j < k; ++j) policy(i, nbrs[j]) = floor[j] + sol.x[j];
            policy(i, i) = sol.x[k];
        } else {
            for (int j = 0; j < k; ++j) policy(i, nbrs[j]) = (*row)[j];
            policy(i, i) = self_prob;
        }
    }
    return policy;
}

GossipExpectation build_gossip_expectation(const Matrix& policy, double alpha, double rho,
                                           const Topology& topo) {
    const int n = topo.nodes;
    GossipExpectation out;
    out.alpha = alpha;
    out.rho = rho;
    out.y = Matrix(n, n, 0.0);
    const double p_global = 1.0 / n; // p_i = 1/M for feasible policies
    const double ar = alpha * rho;

    // Off-diagonal terms once per edge, assigned symmetrically by construction.
    for (int i = 0; i < n; ++i) {
        double diag = 1.0;
        for (int m = 0; m < n; ++m) {
            if (m == i || !topo.edge(i, m)) continue;
            const double p_im = policy(i, m);
            const double p_mi = policy(m, i);
            if (p_im <= 0.0 || p_mi <= 0.0)
                throw error(errc::zero_probability_edge,
                            "edge (" + std::to_string(i) + "," + std::to_string(m) +
                                ") has zero selection probability");
            const double gamma_im = 1.0 / p_im; // (d_{i,m}+d_{m,i}) / (2 p_{i,m})
            const double gamma_mi = 1.0 / p_mi;
            const double first = ar * p_global * (p_im * gamma_im + p_mi * gamma_mi);
            const double second =
                ar * ar * p_global * (p_im * gamma_im * gamma_im + p_mi * gamma_mi * gamma_mi);
            if (m > i) {
                const double y_im = first - second;
                out.y(i, m) = y_im;
                out.y(m, i) = y_im;
            }
            diag += -2.0 * ar * p_global * p_im * gamma_im + second;
        }
        out.y(i, i) = diag;
    }
    return out;
}

double convergence_time(double tbar, double lambda2, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw error(errc::config_invalid, "epsilon must lie in (0,1)");
    if (lambda2 >= 1.0 || lambda2 <= 0.0) return std::numeric_limits<double>::infinity();
    return tbar * std::log(epsilon) / std::log(lambda2);
}

FeasibilityReport check_feasibility(const Matrix& policy, double alpha, double rho,
                                    const Matrix& times, const Topology& topo, double margin) {
    const int n = topo.nodes;
    FeasibilityReport rep;
    double tbar_min = std::numeric_limits<double>::infinity();
    double tbar_max = 0.0;
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        double row_time = 0.0;
        for (int m = 0; m < n; ++m) {
            const double p = policy(i, m);
            row_sum += p;
            if (m != i && !topo.edge(i, m)) {
                rep.worst_support_violation = std::max(rep.worst_support_violation, std::fabs(p));
            } else if (m != i) {
                const double floor = 2.0 * alpha * rho + margin;
                rep.worst_lower_bound_violation =
                    std::max(rep.worst_lower_bound_violation, floor - p);
                row_time += times(i, m) * p;
            }
        }
        rep.worst_row_sum_violation = std::max(rep.worst_row_sum_violation, std::fabs(row_sum - 1.0));
        tbar_min = std::min(tbar_min, row_time);
        tbar_max = std::max(tbar_max, row_time);
    }
    rep.row_stochastic = rep.worst_row_sum_violation <= 1e-9;
    rep.edge_support = rep.worst_support_violation <= 0.0;
    rep.lower_bounds = rep.worst_lower_bound_violation <= 1e-12;
    rep.worst_time_violation =
        tbar_max > 0.0 ? (tbar_max - tbar_min) / std::max(tbar_max, 1e-300) : 0.0;
    rep.equal_iteration_times = rep.worst_time_violation <= 1e-9;
    return rep;
}

std::vector<double> expected_selection_probabilities(const Matrix& policy, const Matrix& times,
                                                     const Topology& topo) {
    const int n = topo.nodes;
    if (n == 1) return {1.0};
    std::vector<double> inv(n, 0.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double tbar_i = 0.0;
        for (int m = 0; m < n; ++m)
            if (topo.edge(i, m)) tbar_i += times(i, m) * policy(i, m);
        if (tbar_i <= 0.0)
            throw error(errc::zero_iteration_time,
                        "node " + std::to_string(i) + " has zero expected iteration time");
        inv[i] = 1.0 / tbar_i;
        total += inv[i];
    }
    for (double& v : inv) v /= total;
    return inv;
}

double approximation_ratio_bound(int m_nodes, double a, double upper, double lower) {
    if (m_nodes <= 3) throw error(errc::invalid_m, "bound requires more than 3 nodes");
    if (!(a > 0.0 && a < 1.0)) throw error(errc::invalid_a, "minimum entry must lie in (0,1)");
    if (!(lower > 0.0 && lower <= upper))
        throw error(errc::invalid_interval, "interval must satisfy 0 < L <= U");
    const double numerator = std::log(static_cast<double>(m_nodes - 1) / (m_nodes - 3));
    // ln(1-2a+a^M) - ln(1-2a+a^{M+1}) evaluated as log1p of the relative gap;
    // the direct difference cancels catastrophically for small a.
    const double am = std::pow(a, m_nodes);
    const double denom_base = 1.0 - 2.0 * a + a * am;
    const double denominator = std::log1p(am * (1.0 - a) / denom_base);
    return upper / lower * numerator / denominator;
}

} // namespace netmax

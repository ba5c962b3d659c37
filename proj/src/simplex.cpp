#include "netmax/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>

namespace netmax {

namespace {

constexpr double kEps = 1e-11;

// Tableau rows: m constraint rows + objective row. Columns: n variables + rhs.
struct Tableau {
    int m = 0;
    int n = 0;
    std::vector<std::vector<double>> t; // (m+1) x (n+1)
    std::vector<int> basis;             // basic variable per row

    double& rhs(int r) { return t[r][n]; }
    double& obj(int j) { return t[m][j]; }

    void pivot(int pr, int pc) {
        const double pv = t[pr][pc];
        for (int j = 0; j <= n; ++j) t[pr][j] /= pv;
        for (int r = 0; r <= m; ++r) {
            if (r == pr) continue;
            const double f = t[r][pc];
            if (f == 0.0) continue;
            for (int j = 0; j <= n; ++j) t[r][j] -= f * t[pr][j];
        }
        basis[pr] = pc;
    }

    // Bland: entering = lowest-index column with negative reduced cost,
    // leaving = lowest-index basic variable among the ratio-test ties.
    LpStatus iterate(int max_iterations) {
        for (int it = 0; it < max_iterations; ++it) {
            int pc = -1;
            for (int j = 0; j < n; ++j) {
                if (obj(j) < -kEps) {
                    pc = j;
                    break;
                }
            }
            if (pc < 0) return LpStatus::optimal;
            int pr = -1;
            double best_ratio = 0.0;
            for (int r = 0; r < m; ++r) {
                if (t[r][pc] <= kEps) continue;
                const double ratio = rhs(r) / t[r][pc];
                if (pr < 0 || ratio < best_ratio - kEps ||
                    (ratio <= best_ratio + kEps && basis[r] < basis[pr])) {
                    pr = r;
                    best_ratio = ratio;
                }
            }
            if (pr < 0) return LpStatus::infeasible; // unbounded; cannot occur for our bounded feasibility LPs
            pivot(pr, pc);
        }
        return LpStatus::iteration_limit;
    }
};

} // namespace

LpSolution solve_lp_equality(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                             const std::vector<double>& c, int max_iterations) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(c.size());

    // Phase 1: artificial variable per row, minimize their sum.
    Tableau tab;
    tab.m = m;
    tab.n = n + m;
    tab.t.assign(m + 1, std::vector<double>(tab.n + 1, 0.0));
    tab.basis.assign(m, 0);
    for (int r = 0; r < m; ++r) {
        assert(static_cast<int>(a[r].size()) == n);
        const double sign = b[r] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) tab.t[r][j] = sign * a[r][j];
        tab.t[r][n + r] = 1.0;
        tab.rhs(r) = sign * b[r];
        tab.basis[r] = n + r;
    }
    for (int j = 0; j < n + m; ++j) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s -= tab.t[r][j];
        tab.obj(j) = j < n ? s : 0.0;
    }
    {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s -= tab.rhs(r);
        tab.rhs(m) = s;
    }

    LpSolution out;
    const LpStatus phase1 = tab.iterate(max_iterations);
    if (phase1 == LpStatus::iteration_limit) {
        out.status = LpStatus::iteration_limit;
        return out;
    }
    if (-tab.rhs(m) > 1e-8) {
        out.status = LpStatus::infeasible;
        return out;
    }

    // Drive leftover artificials out of the basis; a row where that is
    // impossible is redundant and can stay (its artificial is zero).
    for (int r = 0; r < m; ++r) {
        if (tab.basis[r] < n) continue;
        int pc = -1;
        for (int j = 0; j < n; ++j) {
            if (std::fabs(tab.t[r][j]) > 1e-9) {
                pc = j;
                break;
            }
        }
        if (pc >= 0) tab.pivot(r, pc);
    }

    // Phase 2: original objective, artificial columns frozen.
    for (int j = 0; j < tab.n; ++j) tab.obj(j) = j < n ? c[j] : 0.0;
    tab.rhs(m) = 0.0;
    for (int r = 0; r < m; ++r) {
        const int bv = tab.basis[r];
        const double cost = bv < n ? c[bv] : 0.0;
        if (cost == 0.0) continue;
        for (int j = 0; j <= tab.n; ++j) tab.t[m][j] -= cost * tab.t[r][j];
    }
    // Block artificials from re-entering.
    for (int j = n; j < tab.n; ++j)
        for (int r = 0; r <= m; ++r)
            if (tab.basis.end() == std::find(tab.basis.begin(), tab.basis.end(), j)) tab.t[r][j] = 0.0;

    const LpStatus phase2 = tab.iterate(max_iterations);
    if (phase2 != LpStatus::optimal) {
        out.status = phase2;
        return out;
    }

    out.status = LpStatus::optimal;
    out.x.assign(n, 0.0);
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] < n) out.x[tab.basis[r]] = tab.rhs(r);
    out.objective = 0.0;
    for (int j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
    return out;
}

} // namespace netmax

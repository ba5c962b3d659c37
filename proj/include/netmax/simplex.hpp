#pragma once

#include <vector>

namespace netmax {

enum class LpStatus { optimal, infeasible, iteration_limit };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

// Dense two-phase simplex with Bland's anti-cycling rule for
//   min cᵀx  s.t.  Ax = b, x >= 0.
// Rows of A may be linearly dependent; redundant rows are dropped in phase 1.
// Problem sizes here are tiny, so no factorization or pricing tricks.
LpSolution solve_lp_equality(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                             const std::vector<double>& c, int max_iterations = 10000);

} // namespace netmax

#pragma once

#include <vector>

#include "netmax/matrix.hpp"

namespace netmax {

struct UpdateParams {
    double alpha = 0.0;
    double rho = 0.0;
    int d_sum = 2; // d_{i,m} + d_{m,i}; 0 for a self-iteration
    double p_im = 0.0;
};

// The two-step rule: with w = αρ·d_sum/(2 p_{i,m}),
//   x_i ← (1 - w)(x_i - α g) + w x_m,
// reducing to the plain local step x_i - α g when d_sum = 0.
// Throws ZeroProbability when d_sum > 0 and p_im = 0.
std::vector<double> two_step_update(const std::vector<double>& x_i, const std::vector<double>& g,
                                    const std::vector<double>& x_m, const UpdateParams& params);

// D = I + αργ e_i (e_m - e_i)ᵀ, the single-step operator in matrix form.
// Verification-only: one global step must equal D(x - α g) applied per node.
Matrix update_operator(int i, int m, double alpha, double rho, double gamma, int m_nodes);

} // namespace netmax

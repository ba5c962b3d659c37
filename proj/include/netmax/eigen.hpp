#pragma once

#include <vector>

#include "netmax/matrix.hpp"
#include "netmax/policy.hpp"

namespace netmax {

// Largest eigenvalue of a symmetric doubly stochastic matrix restricted to the
// orthogonal complement of the all-ones vector: power iteration on the
// deflated operator Y - (1/M)·11ᵀ, with a cyclic-Jacobi full decomposition as
// fallback when the iteration stalls. Throws NotConverged if both fail.
double second_largest_eigenvalue(const Matrix& y);

inline double second_largest_eigenvalue(const GossipExpectation& g) {
    return second_largest_eigenvalue(g.y);
}

// Full spectrum of a symmetric matrix by cyclic Jacobi sweeps, descending.
std::vector<double> jacobi_eigenvalues(const Matrix& sym, int max_sweeps = 100);

} // namespace netmax

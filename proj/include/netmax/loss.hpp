#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netmax/matrix.hpp"
#include "netmax/rng.hpp"
#include "netmax/topology.hpp"

namespace netmax {

enum class NoiseKind { gaussian, rademacher };

// f_i(x) = ½ (x-b)ᵀ A (x-b) with A symmetric PSD. Strong convexity and
// gradient Lipschitz constants are the extreme eigenvalues of A and are fixed
// at construction (generators produce A with a known spectrum).
struct QuadraticLoss {
    Matrix a;
    std::vector<double> b;
    double mu = 0.0;   // λ_min(A)
    double lips = 0.0; // λ_max(A)
    double noise_sigma = 0.0;
    NoiseKind noise = NoiseKind::gaussian;
    std::optional<double> grad_bound;
    bool diagonal = false;

    int dim() const { return static_cast<int>(b.size()); }

    double value(const std::vector<double>& x) const;
    std::vector<double> gradient_exact(const std::vector<double>& x) const;

    static QuadraticLoss from_diagonal(std::vector<double> diag, std::vector<double> b,
                                       double sigma = 0.0, NoiseKind kind = NoiseKind::gaussian);
    // Dense SPD with spectrum exactly `spectrum`, rotated by seeded Givens
    // rotations so mu/lips are known without an eigensolve.
    static QuadraticLoss random_spd(std::vector<double> spectrum, std::vector<double> b,
                                    uint64_t seed, double sigma = 0.0,
                                    NoiseKind kind = NoiseKind::gaussian);
};

// A(x-b) plus additive zero-mean noise with E[ξᵀξ] = σ² (per-coordinate
// variance σ²/dim). σ = 0 returns the exact gradient.
std::vector<double> local_gradient(const QuadraticLoss& loss, const std::vector<double>& x,
                                   Rng& rng);

// argmin Σ f_i = (Σ A_i)⁻¹ (Σ A_i b_i) by dense elimination with partial
// pivoting. Throws SingularSystem.
std::vector<double> optimum_oracle(const std::vector<QuadraticLoss>& losses);

struct LearningRateCheck {
    bool ok = true;
    double limit = 0.0;
    std::string message;
};

// ok iff 0 < alpha <= 2/(mu_min + lips_max) over all nodes' losses.
LearningRateCheck validate_learning_rate(double alpha, const std::vector<QuadraticLoss>& losses);

// Σ_i [ f_i(x_i) + (ρ/4) Σ_m d_{i,m} ||x_i - x_m||² ] with exact f_i.
double global_objective(const std::vector<std::vector<double>>& xs,
                        const std::vector<QuadraticLoss>& losses, double rho,
                        const Topology& topo);

} // namespace netmax

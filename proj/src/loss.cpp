#include "netmax/loss.hpp"

#include <algorithm>
#include <cmath>

#include "netmax/errors.hpp"

namespace netmax {

double QuadraticLoss::value(const std::vector<double>& x) const {
    const int n = dim();
    double s = 0.0;
    if (diagonal) {
        for (int i = 0; i < n; ++i) {
            const double d = x[i] - b[i];
            s += a(i, i) * d * d;
        }
        return 0.5 * s;
    }
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = x[i] - b[i];
    const auto ad = matvec(a, d);
    return 0.5 * dot(d, ad);
}

std::vector<double> QuadraticLoss::gradient_exact(const std::vector<double>& x) const {
    const int n = dim();
    std::vector<double> g(n);
    if (diagonal) {
        for (int i = 0; i < n; ++i) g[i] = a(i, i) * (x[i] - b[i]);
        return g;
    }
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = x[i] - b[i];
    return matvec(a, d);
}

QuadraticLoss QuadraticLoss::from_diagonal(std::vector<double> diag, std::vector<double> b,
                                           double sigma, NoiseKind kind) {
    QuadraticLoss loss;
    const int n = static_cast<int>(diag.size());
    loss.a = Matrix(n, n, 0.0);
    for (int i = 0; i < n; ++i) loss.a(i, i) = diag[i];
    loss.b = std::move(b);
    loss.mu = *std::min_element(diag.begin(), diag.end());
    loss.lips = *std::max_element(diag.begin(), diag.end());
    loss.noise_sigma = sigma;
    loss.noise = kind;
    loss.diagonal = true;
    return loss;
}

QuadraticLoss QuadraticLoss::random_spd(std::vector<double> spectrum, std::vector<double> b,
                                        uint64_t seed, double sigma, NoiseKind kind) {
    const int n = static_cast<int>(spectrum.size());
    QuadraticLoss loss;
    loss.a = Matrix(n, n, 0.0);
    for (int i = 0; i < n; ++i) loss.a(i, i) = spectrum[i];
    // A <- Gᵀ A G for a few seeded Givens rotations keeps the spectrum exact.
    Rng rng(split_seed(seed, 0x5bd1e995ULL));
    const int rotations = 2 * n;
    for (int r = 0; r < rotations; ++r) {
        const int p = rng.uniform_int(n);
        int q = rng.uniform_int(n - 1);
        if (q >= p) ++q;
        const double theta = rng.uniform(0.0, 6.283185307179586);
        const double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
            const double akp = loss.a(k, p), akq = loss.a(k, q);
            loss.a(k, p) = c * akp - s * akq;
            loss.a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
            const double apk = loss.a(p, k), aqk = loss.a(q, k);
            loss.a(p, k) = c * apk - s * aqk;
            loss.a(q, k) = s * apk + c * aqk;
        }
    }
    // Symmetrize roundoff.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (loss.a(i, j) + loss.a(j, i));
            loss.a(i, j) = v;
            loss.a(j, i) = v;
        }
    loss.b = std::move(b);
    loss.mu = *std::min_element(spectrum.begin(), spectrum.end());
    loss.lips = *std::max_element(spectrum.begin(), spectrum.end());
    loss.noise_sigma = sigma;
    loss.noise = kind;
    loss.diagonal = false;
    return loss;
}

std::vector<double> local_gradient(const QuadraticLoss& loss, const std::vector<double>& x,
                                   Rng& rng) {
    std::vector<double> g = loss.gradient_exact(x);
    if (loss.noise_sigma > 0.0) {
        const int n = loss.dim();
        const double per_coord = loss.noise_sigma / std::sqrt(static_cast<double>(n));
        if (loss.noise == NoiseKind::gaussian) {
            for (int i = 0; i < n; ++i) g[i] += per_coord * rng.normal();
        } else {
            for (int i = 0; i < n; ++i) g[i] += rng.uniform() < 0.5 ? per_coord : -per_coord;
        }
    }
    return g;
}

std::vector<double> optimum_oracle(const std::vector<QuadraticLoss>& losses) {
    const int n = losses.front().dim();
    Matrix lhs(n, n, 0.0);
    std::vector<double> rhs(n, 0.0);
    for (const auto& loss : losses) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) lhs(i, j) += loss.a(i, j);
        const auto ab = matvec(loss.a, loss.b);
        axpy(1.0, ab, rhs);
    }
    // Gaussian elimination with partial pivoting.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(lhs(r, col)) > std::fabs(lhs(pivot, col))) pivot = r;
        if (std::fabs(lhs(pivot, col)) < 1e-12)
            throw error(errc::singular_system, "sum of loss curvatures is singular");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(lhs(col, j), lhs(pivot, j));
            std::swap(rhs[col], rhs[pivot]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = lhs(r, col) / lhs(col, col);
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) lhs(r, j) -= f * lhs(col, j);
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= lhs(i, j) * x[j];
        x[i] = s / lhs(i, i);
    }
    return x;
}

LearningRateCheck validate_learning_rate(double alpha, const std::vector<QuadraticLoss>& losses) {
    LearningRateCheck check;
    double mu_min = losses.front().mu;
    double lips_max = losses.front().lips;
    for (const auto& loss : losses) {
        mu_min = std::min(mu_min, loss.mu);
        lips_max = std::max(lips_max, loss.lips);
    }
    check.limit = mu_min + lips_max > 0.0 ? 2.0 / (mu_min + lips_max) : 0.0;
    if (alpha <= 0.0) {
        check.ok = false;
        check.message = "learning rate must be positive";
    } else if (check.limit > 0.0 && alpha > check.limit + 1e-15) {
        check.ok = false;
        check.message = "learning rate " + std::to_string(alpha) + " exceeds 2/(mu+L) = " +
                        std::to_string(check.limit);
    }
    return check;
}

double global_objective(const std::vector<std::vector<double>>& xs,
                        const std::vector<QuadraticLoss>& losses, double rho,
                        const Topology& topo) {
    const int n = topo.nodes;
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
        obj += losses[i].value(xs[i]);
        if (rho != 0.0) {
            double penalty = 0.0;
            for (int m = 0; m < n; ++m)
                if (topo.edge(i, m)) penalty += squared_distance(xs[i], xs[m]);
            obj += rho / 4.0 * penalty;
        }
    }
    return obj;
}

} // namespace netmax

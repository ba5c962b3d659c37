#include "netmax/eigen.hpp"

#include <algorithm>
#include <cmath>

#include "netmax/errors.hpp"
#include "netmax/rng.hpp"

namespace netmax {

namespace {

constexpr double kResidualTol = 1e-12; // well below the 1e-10 contract
constexpr int kMaxPowerIterations = 20000;

// v <- (Y + I) u - mean(u)·1. For u ⊥ 1 this is the shifted operator Y + I
// restricted to 1⊥ (column sums of Y are 1, so the subspace is invariant);
// the +I shift makes the target λ₂ + 1 the strictly dominant eigenvalue even
// when Y has large negative eigenvalues. The mean subtraction re-projects
// accumulated roundoff.
void apply_shifted(const Matrix& y, const std::vector<double>& u, std::vector<double>& v) {
    const int n = y.rows;
    double mean = 0.0;
    for (double x : u) mean += x;
    mean /= n;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += y(i, j) * u[j];
        v[i] = s + u[i] - mean;
    }
}

bool power_iteration(const Matrix& y, double& lambda_out) {
    const int n = y.rows;
    Rng rng(0x9e3779b97f4a7c15ULL); // fixed start vector: deterministic results
    std::vector<double> v(n), w(n);
    for (double& x : v) x = rng.uniform() - 0.5;
    // Project off the all-ones direction.
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    for (double& x : v) x -= mean;
    double nv = norm2(v);
    if (nv == 0.0) {
        v[0] = 1.0;
        if (n > 1) v[1] = -1.0;
        nv = norm2(v);
    }
    scale(v, 1.0 / nv);

    for (int it = 0; it < kMaxPowerIterations; ++it) {
        apply_shifted(y, v, w);
        const double shifted = dot(v, w); // Rayleigh quotient of the unit vector v
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = w[i] - shifted * v[i];
            res += r * r;
        }
        res = std::sqrt(res);
        if (res <= kResidualTol * std::max(1.0, std::fabs(shifted))) {
            lambda_out = shifted - 1.0;
            return true;
        }
        const double nw = norm2(w);
        if (nw <= 1e-300) {
            lambda_out = shifted - 1.0;
            return true;
        }
        for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
    }
    return false;
}

} // namespace

std::vector<double> jacobi_eigenvalues(const Matrix& sym, int max_sweeps) {
    const int n = sym.rows;
    Matrix a = sym;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) < 1e-14) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

double second_largest_eigenvalue(const Matrix& y) {
    if (!y.square() || y.rows < 1) throw error(errc::config_invalid, "matrix must be square");
    if (y.rows == 1) return 0.0;
    double lambda = 0.0;
    if (power_iteration(y, lambda)) return lambda;
    // Stalled (near-degenerate spectrum): full decomposition instead.
    const auto eig = jacobi_eigenvalues(y);
    if (eig.size() < 2) throw error(errc::not_converged, "eigensolver failed");
    return eig[1];
}

} // namespace netmax

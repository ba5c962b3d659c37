#include "netmax/update.hpp"

#include "netmax/errors.hpp"

namespace netmax {

std::vector<double> two_step_update(const std::vector<double>& x_i, const std::vector<double>& g,
                                    const std::vector<double>& x_m, const UpdateParams& params) {
    const size_t n = x_i.size();
    std::vector<double> out(n);
    if (params.d_sum == 0) {
        for (size_t j = 0; j < n; ++j) out[j] = x_i[j] - params.alpha * g[j];
        return out;
    }
    if (params.p_im <= 0.0)
        throw error(errc::zero_probability, "selected neighbor has zero probability");
    const double w = params.alpha * params.rho * params.d_sum / (2.0 * params.p_im);
    for (size_t j = 0; j < n; ++j)
        out[j] = (1.0 - w) * (x_i[j] - params.alpha * g[j]) + w * x_m[j];
    return out;
}

Matrix update_operator(int i, int m, double alpha, double rho, double gamma, int m_nodes) {
    Matrix d = Matrix::identity(m_nodes);
    const double w = alpha * rho * gamma;
    d(i, i) -= w;
    d(i, m) += w;
    return d;
}

} // namespace netmax

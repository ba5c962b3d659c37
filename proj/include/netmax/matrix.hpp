#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace netmax {

// Dense row-major matrix. Sizes here are tiny (node counts, model dims),
// so no sparse storage or expression templates.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) {
        assert(i >= 0 && i < rows && j >= 0 && j < cols);
        return data[static_cast<size_t>(i) * cols + j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < rows && j >= 0 && j < cols);
        return data[static_cast<size_t>(i) * cols + j];
    }

    bool square() const { return rows == cols; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    assert(static_cast<int>(x.size()) == a.cols);
    std::vector<double> y(a.rows, 0.0);
    for (int i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2_squared(const std::vector<double>& a) { return dot(a, a); }

inline double norm2(const std::vector<double>& a) { return std::sqrt(norm2_squared(a)); }

// y += c * x
inline void axpy(double c, const std::vector<double>& x, std::vector<double>& y) {
    assert(x.size() == y.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline void scale(std::vector<double>& x, double c) {
    for (double& v : x) v *= c;
}

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace netmax

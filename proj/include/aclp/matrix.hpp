#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace aclp {

// Row-major dense matrix of doubles. Enough linear algebra for the katz
// solve and the network layers; nothing clever.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> d;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, fill) {}

    double& at(int r, int c) { return d[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return d[static_cast<std::size_t>(r) * cols + c]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
    Mat c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

inline Mat transpose(const Mat& a) {
    Mat t(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

// Solves A X = B by Gauss-Jordan with partial pivoting. Throws on a
// numerically singular pivot.
inline Mat solve(Mat a, Mat b) {
    if (a.rows != a.cols || a.rows != b.rows) throw std::invalid_argument("solve: shape mismatch");
    const int n = a.rows;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a.at(r, col)) > std::abs(a.at(pivot, col))) pivot = r;
        if (std::abs(a.at(pivot, col)) < 1e-12)
            throw std::runtime_error("solve: singular matrix");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
            }
        if (pivot != col)
            for (int j = 0; j < b.cols; ++j) std::swap(b.at(pivot, j), b.at(col, j));

        const double inv = 1.0 / a.at(col, col);
        for (int j = 0; j < n; ++j) a.at(col, j) *= inv;
        for (int j = 0; j < b.cols; ++j) b.at(col, j) *= inv;

        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a.at(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
            for (int j = 0; j < b.cols; ++j) b.at(r, j) -= f * b.at(col, j);
        }
    }
    return b;
}

inline Mat inverse(const Mat& a) { return solve(a, Mat::identity(a.rows)); }

// Spectral radius estimate for a symmetric non-negative matrix. Power
// iteration runs on A + I so bipartite structures (eigenvalues in +-
// pairs) cannot make it oscillate; the shift is subtracted again.
inline double spectral_radius_estimate(const Mat& a, int iters = 200) {
    if (a.rows == 0) return 0.0;
    std::vector<double> v(a.rows, 1.0 / std::sqrt(static_cast<double>(a.rows)));
    auto apply_shifted = [&a](const std::vector<double>& x) {
        std::vector<double> w(x.size(), 0.0);
        for (int i = 0; i < a.rows; ++i) {
            double acc = x[i]; // the +I part
            for (int j = 0; j < a.cols; ++j) acc += a.at(i, j) * x[j];
            w[i] = acc;
        }
        return w;
    };
    for (int it = 0; it < iters; ++it) {
        std::vector<double> w = apply_shifted(v);
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (double& x : w) x /= norm;
        v = std::move(w);
    }
    const std::vector<double> av = apply_shifted(v);
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) rayleigh += v[i] * av[i];
    return std::max(0.0, rayleigh - 1.0);
}

} // namespace aclp

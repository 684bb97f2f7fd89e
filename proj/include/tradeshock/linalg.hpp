#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tradeshock/error.hpp"

namespace tradeshock {

// Dense row-major matrix, just large enough for regression designs.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct LeastSquaresSolution {
    std::vector<double> beta;
    std::vector<double> xtx_inv_diag;  // diagonal of (X^T X)^{-1}
    double diag_ratio = 0.0;           // min |R_jj| / max |R_jj|
};

// Least squares via Householder QR; no normal equations are formed. The
// factorization's diagonal ratio doubles as the rank check.
inline LeastSquaresSolution householder_least_squares(Matrix a, std::vector<double> y,
                                                      double rank_tol = 1e-10) {
    const std::size_t n = a.rows();
    const std::size_t k = a.cols();
    if (n == 0 || k == 0 || y.size() != n) {
        throw numeric_error("least squares: empty system or size mismatch");
    }
    if (n < k) {
        throw numeric_error("least squares: fewer rows than columns");
    }

    // Reduce A to upper-triangular R, applying each reflection to y as well.
    for (std::size_t j = 0; j < k; ++j) {
        double norm = 0.0;
        for (std::size_t i = j; i < n; ++i) norm = std::hypot(norm, a(i, j));
        if (norm == 0.0) {
            continue;  // zero column; the diag ratio check below rejects it
        }
        const double alpha = a(j, j) > 0.0 ? -norm : norm;
        std::vector<double> v(n - j);
        v[0] = a(j, j) - alpha;
        for (std::size_t i = j + 1; i < n; ++i) v[i - j] = a(i, j);
        double vtv = 0.0;
        for (const double x : v) vtv += x * x;
        a(j, j) = alpha;
        for (std::size_t i = j + 1; i < n; ++i) a(i, j) = 0.0;
        if (vtv == 0.0) continue;
        for (std::size_t c = j + 1; c < k; ++c) {
            double dot = 0.0;
            for (std::size_t i = j; i < n; ++i) dot += v[i - j] * a(i, c);
            const double f = 2.0 * dot / vtv;
            for (std::size_t i = j; i < n; ++i) a(i, c) -= f * v[i - j];
        }
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i - j] * y[i];
        const double f = 2.0 * dot / vtv;
        for (std::size_t i = j; i < n; ++i) y[i] -= f * v[i - j];
    }

    double min_diag = std::fabs(a(0, 0));
    double max_diag = min_diag;
    for (std::size_t j = 1; j < k; ++j) {
        const double d = std::fabs(a(j, j));
        min_diag = std::min(min_diag, d);
        max_diag = std::max(max_diag, d);
    }
    LeastSquaresSolution sol;
    sol.diag_ratio = max_diag > 0.0 ? min_diag / max_diag : 0.0;
    if (sol.diag_ratio <= rank_tol) {
        throw numeric_error("least squares: rank-deficient design (diagonal ratio " +
                            std::to_string(sol.diag_ratio) + ")");
    }

    // Back-substitute R beta = Q^T y.
    sol.beta.assign(k, 0.0);
    for (std::size_t jj = k; jj-- > 0;) {
        double s = y[jj];
        for (std::size_t c = jj + 1; c < k; ++c) s -= a(jj, c) * sol.beta[c];
        sol.beta[jj] = s / a(jj, jj);
    }

    // (X^T X)^{-1} = R^{-1} R^{-T}; its diagonal is the row sums of squares of
    // R^{-1}, found by solving R z = e_j per column.
    Matrix rinv(k, k);
    for (std::size_t col = 0; col < k; ++col) {
        for (std::size_t jj = k; jj-- > 0;) {
            double s = jj == col ? 1.0 : 0.0;
            for (std::size_t c = jj + 1; c < k; ++c) s -= a(jj, c) * rinv(c, col);
            rinv(jj, col) = s / a(jj, jj);
        }
    }
    sol.xtx_inv_diag.assign(k, 0.0);
    for (std::size_t row = 0; row < k; ++row) {
        double s = 0.0;
        for (std::size_t col = row; col < k; ++col) s += rinv(row, col) * rinv(row, col);
        sol.xtx_inv_diag[row] = s;
    }
    return sol;
}

}  // namespace tradeshock

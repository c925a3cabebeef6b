#pragma once

// Test-side reference implementations, kept independent of the library code
// paths they check.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracles {

// Dense linear solve by Gaussian elimination with partial pivoting.
// a is row-major n x n; returns x with a x = b.
inline std::vector<double> gauss_solve(std::size_t n, std::vector<double> a,
                                       std::vector<double> b) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
            std::swap(b[col], b[pivot]);
        }
        const double d = a[col * n + col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[row * n + j] -= f * a[col * n + j];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double sum = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) sum -= a[ii * n + j] * x[j];
        x[ii] = sum / a[ii * n + ii];
    }
    return x;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2_sq(const std::vector<double>& a) { return dot(a, a); }

// Capped-loss objective evaluated directly from columns: xs[i] is the i-th
// feature column, rewards[i] its response.
inline double capped_objective(const std::vector<std::vector<double>>& xs,
                               const std::vector<double>& rewards,
                               const std::vector<double>& w, double zeta_c,
                               double epsilon) {
    double obj = zeta_c * norm2_sq(w);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double res = rewards[i] - dot(xs[i], w);
        obj += std::min(res * res, epsilon);
    }
    return obj;
}

// Ridge solution restricted to the subset of columns with keep[i] != 0,
// solved by the elimination oracle above.
inline std::vector<double> subset_ridge(const std::vector<std::vector<double>>& xs,
                                        const std::vector<double>& rewards,
                                        const std::vector<char>& keep,
                                        double zeta_c) {
    const std::size_t dim = xs.front().size();
    std::vector<double> gram(dim * dim, 0.0);
    std::vector<double> rhs(dim, 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!keep[i]) continue;
        for (std::size_t p = 0; p < dim; ++p) {
            rhs[p] += xs[i][p] * rewards[i];
            for (std::size_t q = 0; q < dim; ++q) gram[p * dim + q] += xs[i][p] * xs[i][q];
        }
    }
    for (std::size_t p = 0; p < dim; ++p) gram[p * dim + p] += zeta_c;
    return gauss_solve(dim, gram, rhs);
}

}  // namespace oracles

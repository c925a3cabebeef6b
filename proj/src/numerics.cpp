#include "rbandit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rbandit {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InputError(std::string(what) + " contains a non-finite entry");
        }
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw InputError("matrix data size does not match dimensions");
    }
    require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector solve_spd(const Matrix& a, const Vector& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw InputError("solve_spd: matrix is not square");
    if (b.size() != n) throw InputError("solve_spd: right-hand side length mismatch");
    require_finite(a.data(), "solve_spd: matrix");
    require_finite(b, "solve_spd: right-hand side");

    constexpr double kSymTol = 1e-10;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double lhs = a(i, j), rhs = a(j, i);
            const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
            if (std::abs(lhs - rhs) > kSymTol * scale) {
                throw InputError("solve_spd: matrix is not symmetric");
            }
        }
    }

    // In-place lower Cholesky factor.
    Matrix l(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double pivot = a(k, k);
        for (std::size_t j = 0; j < k; ++j) pivot -= l(k, j) * l(k, j);
        if (!(pivot > 0.0)) {
            throw NumericalError("solve_spd: leading minor of order " +
                                 std::to_string(k + 1) + " is not positive definite");
        }
        const double diag = std::sqrt(pivot);
        l(k, k) = diag;
        for (std::size_t i = k + 1; i < n; ++i) {
            double sum = a(i, k);
            for (std::size_t j = 0; j < k; ++j) sum -= l(i, j) * l(k, j);
            l(i, k) = sum / diag;
        }
    }

    // L y = b, then L^T x = y.
    Vector x(b);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = x[i];
        for (std::size_t j = 0; j < i; ++j) sum -= l(i, j) * x[j];
        x[i] = sum / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double sum = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) sum -= l(j, ii) * x[j];
        x[ii] = sum / l(ii, ii);
    }
    return x;
}

double quantile(std::span<const double> data, double p) {
    if (data.empty()) throw InputError("quantile: empty data");
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("quantile: p must lie in [0, 1]");
    require_finite(data, "quantile: data");

    Vector sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());

    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : state_(0), inc_((stream << 1u) | 1u) {
    next_u32();
    state_ += seed;
    next_u32();
}

std::uint32_t RngStream::next_u32() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
}

double RngStream::next_unit() {
    return static_cast<double>(next_u32()) * 0x1p-32;
}

std::uint32_t RngStream::next_below(std::uint32_t bound) {
    if (bound == 0) throw InputError("next_below: bound must be positive");
    return static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(next_u32()) * bound) >> 32u);
}

double gauss(RngStream& stream, double mean, double variance) {
    if (!std::isfinite(mean) || !std::isfinite(variance)) {
        throw InputError("gauss: non-finite parameters");
    }
    if (variance < 0.0) throw InputError("gauss: negative variance");
    if (variance == 0.0) return mean;

    // u1 in (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(stream.next_u32()) + 1.0) * 0x1p-32;
    const double u2 = stream.next_unit();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return mean + std::sqrt(variance) * z;
}

}  // namespace rbandit

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rbandit/errors.hpp"

namespace rbandit {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Construction from data rejects
// non-finite entries; operations check dimensions.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);               // zero-filled
    Matrix(std::size_t rows, std::size_t cols, Vector data);  // row-major

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const Vector& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

// Solves A x = b for symmetric positive-definite A via Cholesky; never forms
// an inverse. A must be symmetric to 1e-10 relative tolerance. Throws
// NumericalError naming the offending leading minor when A is not positive
// definite, InputError on non-finite or mismatched input.
Vector solve_spd(const Matrix& a, const Vector& b);

// Quantile by linear interpolation on sorted data: with sorted values
// v[0..n-1] and h = p*(n-1), returns v[floor(h)] + frac(h)*(v[floor(h)+1] -
// v[floor(h)]). Requires n >= 1 and p in [0, 1].
double quantile(std::span<const double> data, double p);

// Seeded random stream: identical (seed, stream) pairs replay the same
// sequence; distinct stream ids give statistically independent sequences.
// PCG32 (pcg-random.org), XSH-RR output on a 64-bit LCG state.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();

    // Uniform double in [0, 1).
    double next_unit();

    // Uniform integer in [0, bound), bound >= 1.
    std::uint32_t next_below(std::uint32_t bound);

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

// Draw from N(mean, variance) by Box-Muller. Consumes two words from the
// stream; a zero-variance draw returns the mean exactly and consumes nothing.
double gauss(RngStream& stream, double mean, double variance);

}  // namespace rbandit

#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rbandit/features.hpp"
#include "rbandit/numerics.hpp"

namespace rbandit {

// One observed (state, action, reward) decision point.
struct Tuple {
    State s;
    Action a = 0;
    double r = 0.0;
};

// Ordered per-user sequence of observations.
using Trajectory = std::vector<Tuple>;

// Binary per-tuple weights: 1 keeps the tuple, 0 excludes it as an outlier.
using WeightVector = std::vector<std::uint8_t>;

// Result of the capped-loss critic: coefficients, the weights it settled on,
// the threshold used and the objective values along the reweighting loop.
struct CriticFit {
    Vector w;
    WeightVector u_weights;
    double epsilon = 0.0;
    int iterations = 0;  // weighted solves performed (>= 1)
    std::vector<double> objective_trace;  // starts from the w = 0 baseline
    std::vector<Vector> w_trace;          // iterates, starting from w = 0
    bool all_excluded = false;  // every tuple got weight 0; w collapsed to 0
};

// Feature matrix with column i = x(s_i, a_i), dimensions u x M.
Matrix reward_feature_matrix(const Trajectory& traj);
Vector reward_vector(const Trajectory& traj);

// Ridge estimate of the expected-reward coefficients: solves
// (X X^T + zeta_c I) w = X r. Requires zeta_c > 0.
Vector ridge_fit(const Matrix& x, const Vector& r, double zeta_c);

// Adaptive residual cap from the boxplot rule on squared residuals:
// tau * (q3 + 1.5 * (q3 - q1)), floored at 1e-12 so the inlier indicator
// stays well defined when all residuals vanish.
double compute_epsilon(std::span<const double> residuals_sq, double tau);

// Per-tuple squared residuals (r_i - x_i^T w)^2.
Vector squared_residuals(const Matrix& x, const Vector& r, const Vector& w);

// Inlier indicator: weight 1 iff squared residual < epsilon (strict; ties
// are excluded).
WeightVector inlier_weights(std::span<const double> residuals_sq, double epsilon);

// Capped-loss objective: sum_i min((r_i - x_i^T w)^2, epsilon) + zeta_c |w|^2.
double critic_objective(const Matrix& x, const Vector& r, const Vector& w,
                        double zeta_c, double epsilon);

// Alternating weighted-ridge / weight-update fit of the capped objective.
// Solves (X U X^T + zeta_c I) w = X U r with U = diag(u), recomputes u from
// the new residuals, and stops when u repeats exactly. u_init defaults to all
// ones. Throws ConvergenceError (carrying the trace) if max_iters is hit.
CriticFit capped_fit(const Matrix& x, const Vector& r, double zeta_c,
                     double epsilon,
                     std::optional<WeightVector> u_init = std::nullopt,
                     int max_iters = 100);

// Instrumentation: counts which estimation machinery ran, so callers can
// verify a plain-ridge path never touched the capped-loss code.
struct CriticCounters {
    std::atomic<std::uint64_t> epsilon_calls{0};
    std::atomic<std::uint64_t> weight_update_steps{0};

    void reset() {
        epsilon_calls = 0;
        weight_update_steps = 0;
    }
};
CriticCounters& critic_counters();

}  // namespace rbandit

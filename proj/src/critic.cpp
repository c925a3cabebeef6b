#include "rbandit/critic.hpp"

#include <cmath>
#include <string>

namespace rbandit {

namespace {

constexpr double kEpsilonFloor = 1e-12;

void require_finite_vector(const Vector& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw InputError(std::string(what) + " contains a non-finite entry");
        }
    }
}

void require_critic_inputs(const Matrix& x, const Vector& r, double zeta_c) {
    if (x.cols() == 0) throw InputError("critic: empty feature matrix");
    if (r.size() != x.cols()) {
        throw InputError("critic: reward count does not match feature columns");
    }
    require_finite_vector(x.data(), "critic: features");
    require_finite_vector(r, "critic: rewards");
    if (!(zeta_c > 0.0)) throw InputError("critic: zeta_c must be positive");
}

// Weighted normal equations (X U X^T + zeta_c I) w = X U r; an all-zero u
// reduces to zeta_c I w = 0, i.e. w = 0.
Vector weighted_ridge(const Matrix& x, const Vector& r, double zeta_c,
                      const WeightVector& u) {
    const std::size_t dim = x.rows();
    const std::size_t m = x.cols();
    Matrix gram(dim, dim);
    Vector rhs(dim, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (!u[i]) continue;
        for (std::size_t p = 0; p < dim; ++p) {
            const double xp = x(p, i);
            rhs[p] += xp * r[i];
            for (std::size_t q = p; q < dim; ++q) {
                gram(p, q) += xp * x(q, i);
            }
        }
    }
    for (std::size_t p = 0; p < dim; ++p) {
        gram(p, p) += zeta_c;
        for (std::size_t q = p + 1; q < dim; ++q) gram(q, p) = gram(p, q);
    }
    return solve_spd(gram, rhs);
}

double squared_norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// f(w, u) = sum_i [u_i res_i^2 + (1 - u_i) epsilon] + zeta_c |w|^2.
double bivariate_objective(const Vector& residuals_sq, const WeightVector& u,
                           double epsilon, double zeta_c, const Vector& w) {
    double f = zeta_c * squared_norm(w);
    for (std::size_t i = 0; i < residuals_sq.size(); ++i) {
        f += u[i] ? residuals_sq[i] : epsilon;
    }
    return f;
}

}  // namespace

Matrix reward_feature_matrix(const Trajectory& traj) {
    if (traj.empty()) throw InputError("trajectory must hold at least one tuple");
    const std::size_t dim = reward_feature_dim(traj.front().s.env);
    Matrix x(dim, traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Vector xi = reward_features(traj[i].s, traj[i].a);
        for (std::size_t p = 0; p < dim; ++p) x(p, i) = xi[p];
    }
    return x;
}

Vector reward_vector(const Trajectory& traj) {
    Vector r(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) r[i] = traj[i].r;
    return r;
}

Vector ridge_fit(const Matrix& x, const Vector& r, double zeta_c) {
    require_critic_inputs(x, r, zeta_c);
    return weighted_ridge(x, r, zeta_c, WeightVector(x.cols(), 1));
}

double compute_epsilon(std::span<const double> residuals_sq, double tau) {
    if (residuals_sq.empty()) throw InputError("compute_epsilon: empty residuals");
    if (!(tau > 0.0)) throw InputError("compute_epsilon: tau must be positive");
    for (double v : residuals_sq) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw InputError("compute_epsilon: squared residuals must be finite and >= 0");
        }
    }
    critic_counters().epsilon_calls.fetch_add(1, std::memory_order_relaxed);

    const double q1 = quantile(residuals_sq, 0.25);
    const double q3 = quantile(residuals_sq, 0.75);
    const double eps = tau * (q3 + 1.5 * (q3 - q1));
    return std::max(eps, kEpsilonFloor);
}

Vector squared_residuals(const Matrix& x, const Vector& r, const Vector& w) {
    if (w.size() != x.rows()) throw InputError("squared_residuals: coefficient length mismatch");
    if (r.size() != x.cols()) throw InputError("squared_residuals: reward length mismatch");
    Vector out(x.cols());
    for (std::size_t i = 0; i < x.cols(); ++i) {
        double pred = 0.0;
        for (std::size_t p = 0; p < x.rows(); ++p) pred += x(p, i) * w[p];
        const double res = r[i] - pred;
        out[i] = res * res;
    }
    return out;
}

WeightVector inlier_weights(std::span<const double> residuals_sq, double epsilon) {
    WeightVector u(residuals_sq.size());
    for (std::size_t i = 0; i < residuals_sq.size(); ++i) {
        u[i] = residuals_sq[i] < epsilon ? 1 : 0;
    }
    return u;
}

double critic_objective(const Matrix& x, const Vector& r, const Vector& w,
                        double zeta_c, double epsilon) {
    if (!(epsilon > 0.0)) throw InputError("critic_objective: epsilon must be positive");
    if (!(zeta_c >= 0.0)) throw InputError("critic_objective: zeta_c must be >= 0");
    require_finite_vector(w, "critic_objective: w");
    const Vector res = squared_residuals(x, r, w);
    double obj = zeta_c * squared_norm(w);
    for (double v : res) obj += std::min(v, epsilon);
    return obj;
}

CriticFit capped_fit(const Matrix& x, const Vector& r, double zeta_c,
                     double epsilon, std::optional<WeightVector> u_init,
                     int max_iters) {
    require_critic_inputs(x, r, zeta_c);
    if (!(epsilon > 0.0)) throw InputError("capped_fit: epsilon must be positive");
    if (max_iters < 1) throw InputError("capped_fit: max_iters must be >= 1");

    const std::size_t m = x.cols();
    WeightVector u = u_init.value_or(WeightVector(m, 1));
    if (u.size() != m) throw InputError("capped_fit: u_init length mismatch");

    CriticFit fit;
    fit.epsilon = epsilon;

    // Baseline objective at w = 0 with the initial weights.
    {
        Vector zero(x.rows(), 0.0);
        fit.objective_trace.push_back(
            bivariate_objective(squared_residuals(x, r, zero), u, epsilon, zeta_c, zero));
        fit.w_trace.push_back(zero);
    }

    for (int t = 1; t <= max_iters; ++t) {
        const Vector w = weighted_ridge(x, r, zeta_c, u);
        const Vector res = squared_residuals(x, r, w);
        const WeightVector u_next = inlier_weights(res, epsilon);
        critic_counters().weight_update_steps.fetch_add(1, std::memory_order_relaxed);

        fit.objective_trace.push_back(bivariate_objective(res, u_next, epsilon, zeta_c, w));
        fit.w_trace.push_back(w);
        fit.iterations = t;
        fit.w = w;

        if (u_next == u) {
            fit.u_weights = u_next;
            fit.all_excluded = true;
            for (std::uint8_t ui : u_next) {
                if (ui) {
                    fit.all_excluded = false;
                    break;
                }
            }
            return fit;
        }
        u = u_next;
    }
    throw ConvergenceError(
        "capped_fit: weights did not stabilize within " + std::to_string(max_iters) +
            " iterations",
        fit.objective_trace);
}

CriticCounters& critic_counters() {
    static CriticCounters counters;
    return counters;
}

}  // namespace rbandit

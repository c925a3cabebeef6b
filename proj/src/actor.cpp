#include "rbandit/actor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbandit {

std::array<double, 2> boltzmann_pair(double e0, double e1) {
    const double m = std::min(e0, e1);
    const double z0 = std::exp(-(e0 - m));
    const double z1 = std::exp(-(e1 - m));
    const double z = z0 + z1;
    return {z0 / z, z1 / z};
}

namespace {

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_norm(const Vector& v) { return dot(v, v); }

void require_theta(const Policy& policy) {
    if (policy.theta.size() != policy_feature_dim(policy.env)) {
        throw InputError("policy parameter length does not match the feature map");
    }
    for (double t : policy.theta) {
        if (!std::isfinite(t)) throw InputError("policy parameters must be finite");
    }
}

// Per-tuple quantities that do not change while theta moves.
struct ActorWorkspace {
    EnvKind env = EnvKind::heartsteps;
    std::size_t m = 0;           // tuple count
    std::vector<double> q0, q1;  // estimated expected reward per action
    std::vector<Vector> phi0, phi1;
    std::vector<std::uint8_t> u;
    double zeta_a = 0.0;

    ActorWorkspace(const Trajectory& traj, const WeightVector& u_weights,
                   const Vector& w, EnvKind env_kind, double za)
        : env(env_kind), m(traj.size()), u(u_weights.begin(), u_weights.end()),
          zeta_a(za) {
        if (traj.empty()) throw InputError("actor: trajectory must not be empty");
        if (u_weights.size() != traj.size()) {
            throw InputError("actor: weight count does not match the trajectory");
        }
        if (w.size() != reward_feature_dim(env)) {
            throw InputError("actor: critic coefficient length mismatch");
        }
        if (!(za >= 0.0)) throw InputError("actor: zeta_a must be >= 0");
        q0.resize(m);
        q1.resize(m);
        phi0.resize(m);
        phi1.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (traj[i].s.env != env) throw InputError("actor: mixed environments in trajectory");
            if (!u[i]) continue;  // excluded tuples never enter the objective
            q0[i] = dot(reward_features(traj[i].s, 0), w);
            q1[i] = dot(reward_features(traj[i].s, 1), w);
            phi0[i] = policy_features(traj[i].s, 0);
            phi1[i] = policy_features(traj[i].s, 1);
        }
    }

    double objective(const Vector& theta) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!u[i]) continue;
            const auto pi = boltzmann_pair(dot(theta, phi0[i]), dot(theta, phi1[i]));
            acc += pi[0] * q0[i] + pi[1] * q1[i];
        }
        return acc / static_cast<double>(m) - 0.5 * zeta_a * squared_norm(theta);
    }

    Vector gradient(const Vector& theta) const {
        Vector g(theta.size(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (!u[i]) continue;
            const auto pi = boltzmann_pair(dot(theta, phi0[i]), dot(theta, phi1[i]));
            // sum_a q_a pi_a (phibar - phi_a) = pi0 pi1 (q0 - q1)(phi1 - phi0)
            const double c = pi[0] * pi[1] * (q0[i] - q1[i]);
            for (std::size_t k = 0; k < g.size(); ++k) {
                g[k] += c * (phi1[i][k] - phi0[i][k]);
            }
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t k = 0; k < g.size(); ++k) {
            g[k] = g[k] * inv_m - zeta_a * theta[k];
        }
        return g;
    }
};

}  // namespace

Policy Policy::uniform(EnvKind env) {
    return Policy{env, Vector(policy_feature_dim(env), 0.0)};
}

std::array<double, 2> policy_prob(const Policy& policy, const State& s) {
    require_theta(policy);
    if (s.env != policy.env) throw InputError("policy_prob: state from a different environment");
    const double e0 = dot(policy.theta, policy_features(s, 0));
    const double e1 = dot(policy.theta, policy_features(s, 1));
    return boltzmann_pair(e0, e1);
}

double actor_objective(const Trajectory& traj, const WeightVector& u,
                       const Vector& w, const Policy& policy, double zeta_a) {
    require_theta(policy);
    return ActorWorkspace(traj, u, w, policy.env, zeta_a).objective(policy.theta);
}

Vector actor_gradient(const Trajectory& traj, const WeightVector& u,
                      const Vector& w, const Policy& policy, double zeta_a) {
    require_theta(policy);
    return ActorWorkspace(traj, u, w, policy.env, zeta_a).gradient(policy.theta);
}

AscentResult maximize_actor(const Trajectory& traj, const WeightVector& u,
                            const Vector& w, const Policy& theta_init,
                            double zeta_a, const AscentOptions& opts) {
    require_theta(theta_init);
    const ActorWorkspace ws(traj, u, w, theta_init.env, zeta_a);

    AscentResult out;
    out.policy = theta_init;
    Vector theta = theta_init.theta;

    double j = ws.objective(theta);
    if (!std::isfinite(j)) throw NumericalError("maximize_actor: objective is not finite");
    out.objective_trace.push_back(j);

    constexpr double kArmijo = 1e-4;
    constexpr int kMaxBacktracks = 60;
    double step = 1.0;

    Vector g = ws.gradient(theta);
    for (int it = 0; it < opts.max_steps; ++it) {
        const double gn2 = squared_norm(g);
        out.grad_norm = std::sqrt(gn2);
        if (out.grad_norm <= opts.grad_tol) {
            out.converged = true;
            break;
        }

        double alpha = step;
        bool accepted = false;
        Vector candidate(theta.size());
        double j_new = 0.0;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            for (std::size_t k = 0; k < theta.size(); ++k) {
                candidate[k] = theta[k] + alpha * g[k];
            }
            j_new = ws.objective(candidate);
            if (std::isfinite(j_new) && j_new >= j + kArmijo * alpha * gn2) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            out.line_search_failed = true;
            break;
        }

        theta = candidate;
        j = j_new;
        out.objective_trace.push_back(j);
        out.steps = it + 1;
        step = std::min(alpha * 2.0, 1e9);
        g = ws.gradient(theta);
    }

    out.grad_norm = std::sqrt(squared_norm(g));
    out.converged = out.grad_norm <= opts.grad_tol;
    out.objective = j;
    out.policy = Policy{theta_init.env, std::move(theta)};
    return out;
}

namespace {

// Shared outer loop: alternate a critic refit with an actor ascent until the
// policy parameters settle. The critic step ignores theta, so successive
// refits are identical and the loop ends once the ascent stops moving.
template <typename CriticStep>
ActorCriticResult actor_critic_loop(const Trajectory& traj,
                                    const ActorCriticConfig& config,
                                    CriticStep critic_step) {
    if (traj.empty()) throw InputError("run_actor_critic: empty trajectory");
    if (!(config.zeta_a > 0.0)) throw InputError("run_actor_critic: zeta_a must be positive");

    ActorCriticResult out;
    out.policy = Policy::uniform(traj.front().s.env);

    for (int outer = 1; outer <= config.max_outer_iters; ++outer) {
        out.outer_iters = outer;
        out.fit = critic_step();

        const AscentResult asc = maximize_actor(traj, out.fit.u_weights, out.fit.w,
                                                out.policy, config.zeta_a, config.ascent);
        double change = 0.0;
        for (std::size_t k = 0; k < asc.policy.theta.size(); ++k) {
            change = std::max(change, std::abs(asc.policy.theta[k] - out.policy.theta[k]));
        }
        out.policy = asc.policy;
        if (change <= config.theta_tol) break;
    }
    return out;
}

}  // namespace

ActorCriticResult run_actor_critic(const Trajectory& traj,
                                   const ActorCriticConfig& config) {
    const Matrix x = reward_feature_matrix(traj);
    const Vector r = reward_vector(traj);

    return actor_critic_loop(traj, config, [&] {
        double epsilon;
        if (config.epsilon_override) {
            epsilon = *config.epsilon_override;
        } else {
            const Vector w0 = ridge_fit(x, r, config.zeta_c);
            epsilon = compute_epsilon(squared_residuals(x, r, w0), config.tau);
        }
        return capped_fit(x, r, config.zeta_c, epsilon, std::nullopt,
                          config.max_critic_iters);
    });
}

ActorCriticResult run_plain_actor_critic(const Trajectory& traj,
                                         const ActorCriticConfig& config) {
    const Matrix x = reward_feature_matrix(traj);
    const Vector r = reward_vector(traj);

    return actor_critic_loop(traj, config, [&] {
        CriticFit fit;
        fit.w = ridge_fit(x, r, config.zeta_c);
        fit.u_weights.assign(traj.size(), 1);
        fit.epsilon = std::numeric_limits<double>::infinity();
        fit.iterations = 1;
        return fit;
    });
}

}  // namespace rbandit

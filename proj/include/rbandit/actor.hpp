#pragma once

#include <array>
#include <optional>

#include "rbandit/critic.hpp"

namespace rbandit {

// Boltzmann stochastic policy over the two actions:
// pi_theta(a|s) = exp(-theta.phi(s,a)) / sum_a' exp(-theta.phi(s,a')).
struct Policy {
    EnvKind env = EnvKind::heartsteps;
    Vector theta;

    static Policy uniform(EnvKind env);  // theta = 0
};

// Two-way softmax over negated energies, shifted by the smaller energy so
// large parameters cannot overflow: p_a proportional to exp(-e_a).
std::array<double, 2> boltzmann_pair(double e0, double e1);

// Action probabilities (index = action), strictly positive, summing to 1.
std::array<double, 2> policy_prob(const Policy& policy, const State& s);

// Weighted policy-value objective:
// J(theta) = (1/M) sum_i u_i sum_a pi_theta(a|s_i) x(s_i,a).w
//            - (zeta_a/2) |theta|^2.
double actor_objective(const Trajectory& traj, const WeightVector& u,
                       const Vector& w, const Policy& policy, double zeta_a);

// Analytic gradient of actor_objective with respect to theta.
Vector actor_gradient(const Trajectory& traj, const WeightVector& u,
                      const Vector& w, const Policy& policy, double zeta_a);

struct AscentOptions {
    double grad_tol = 1e-6;
    int max_steps = 500;
};

struct AscentResult {
    Policy policy;
    double objective = 0.0;
    double grad_norm = 0.0;
    int steps = 0;
    bool converged = false;          // gradient norm reached grad_tol
    bool line_search_failed = false;  // no ascent step found; theta as-is
    std::vector<double> objective_trace;  // initial value plus accepted steps
};

// Maximizes the actor objective by gradient ascent with backtracking line
// search (Armijo). Accepted steps strictly increase the objective.
AscentResult maximize_actor(const Trajectory& traj, const WeightVector& u,
                            const Vector& w, const Policy& theta_init,
                            double zeta_a, const AscentOptions& opts = {});

struct ActorCriticConfig {
    double zeta_a = 1e-3;
    double zeta_c = 1e-3;
    double tau = 1.0;
    // Fixed residual cap instead of the adaptive boxplot rule (testing and
    // the uncapped-limit path).
    std::optional<double> epsilon_override;
    int max_critic_iters = 100;
    int max_outer_iters = 50;
    double theta_tol = 1e-6;  // sup-norm change that ends the outer loop
    AscentOptions ascent;
};

struct ActorCriticResult {
    Policy policy;
    CriticFit fit;
    int outer_iters = 0;
};

// Full robust loop for one user: fit the capped critic to convergence, run
// the actor ascent, and repeat until theta settles. The critic does not
// depend on theta, so the loop exits right after the first actor step
// reproduces itself.
ActorCriticResult run_actor_critic(const Trajectory& traj,
                                   const ActorCriticConfig& config);

// Uncapped baseline with the same loop structure: ridge critic, all tuples
// kept, unweighted actor ascent. Never touches the capped-loss machinery.
ActorCriticResult run_plain_actor_critic(const Trajectory& traj,
                                         const ActorCriticConfig& config);

}  // namespace rbandit

#pragma once

#include "rbandit/envs.hpp"

namespace rbandit {

// Long-run policy quality: per-user tail-average rewards and their mean.
struct EvalReport {
    std::vector<double> per_user;
    double elrar = 0.0;  // mean of per_user
    std::size_t horizon = 0;
    std::size_t burn_in = 0;
};

// Rolls a fresh environment under the policy for `horizon` steps and returns
// the mean reward of the steps after the burn-in.
double average_reward(const Policy& policy, const EnvModel& env,
                      std::size_t horizon, std::size_t burn_in, RngStream& stream);

// One policy, environment and stream per user; the report carries each
// user's tail average and their mean.
EvalReport elrar(const std::vector<Policy>& policies,
                 const std::vector<EnvModel>& envs, std::size_t horizon,
                 std::size_t burn_in, std::vector<RngStream>& streams);

}  // namespace rbandit

#include "rbandit/eval.hpp"

namespace rbandit {

double average_reward(const Policy& policy, const EnvModel& env,
                      std::size_t horizon, std::size_t burn_in, RngStream& stream) {
    if (horizon <= burn_in) throw InputError("average_reward: horizon must exceed burn_in");

    EnvSim sim(env, stream);
    double sum = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        const Action a = sample_action(policy, sim.state(), stream);
        const double r = sim.step(a);
        if (t >= burn_in) sum += r;
    }
    return sum / static_cast<double>(horizon - burn_in);
}

EvalReport elrar(const std::vector<Policy>& policies,
                 const std::vector<EnvModel>& envs, std::size_t horizon,
                 std::size_t burn_in, std::vector<RngStream>& streams) {
    if (policies.empty()) throw InputError("elrar: need at least one user");
    if (policies.size() != envs.size() || policies.size() != streams.size()) {
        throw InputError("elrar: policies, environments and streams must have equal counts");
    }

    EvalReport report;
    report.horizon = horizon;
    report.burn_in = burn_in;
    report.per_user.reserve(policies.size());
    for (std::size_t n = 0; n < policies.size(); ++n) {
        report.per_user.push_back(
            average_reward(policies[n], envs[n], horizon, burn_in, streams[n]));
    }
    double sum = 0.0;
    for (double eta : report.per_user) sum += eta;
    report.elrar = sum / static_cast<double>(report.per_user.size());
    return report;
}

}  // namespace rbandit

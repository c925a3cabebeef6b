#include "rbandit/features.hpp"

#include <cmath>

namespace rbandit {

namespace {

void require_action(Action a) {
    if (a != 0 && a != 1) throw InputError("action must be 0 or 1");
}

void require_state(const State& s) {
    if (s.env == EnvKind::heartsteps) {
        for (double v : s.hs) {
            if (!std::isfinite(v)) throw InputError("heartsteps state must be finite");
        }
    } else {
        if (s.cell < 0 || s.cell >= kChainStates) {
            throw InputError("chain-walk state out of range");
        }
    }
}

}  // namespace

State State::heartsteps(double weather, double engagement, double fatigue) {
    State s;
    s.env = EnvKind::heartsteps;
    s.hs = {weather, engagement, fatigue};
    require_state(s);
    return s;
}

State State::chainwalk(int cell) {
    State s;
    s.env = EnvKind::chainwalk;
    s.cell = cell;
    require_state(s);
    return s;
}

std::size_t reward_feature_dim(EnvKind) { return 8; }

std::size_t policy_feature_dim(EnvKind env) {
    return env == EnvKind::heartsteps ? 4 : 5;
}

Vector reward_features(const State& s, Action a) {
    require_state(s);
    require_action(a);
    Vector x(reward_feature_dim(s.env), 0.0);
    if (s.env == EnvKind::heartsteps) {
        const double av = static_cast<double>(a);
        x[0] = 1.0;
        x[1] = s.hs[0];
        x[2] = s.hs[1];
        x[3] = s.hs[2];
        x[4] = av;
        x[5] = s.hs[0] * av;
        x[6] = s.hs[1] * av;
        x[7] = s.hs[2] * av;
    } else {
        x[static_cast<std::size_t>(kChainStates * a + s.cell)] = 1.0;
    }
    return x;
}

Vector policy_features(const State& s, Action a) {
    require_state(s);
    require_action(a);
    Vector phi(policy_feature_dim(s.env), 0.0);
    const double av = static_cast<double>(a);
    if (s.env == EnvKind::heartsteps) {
        phi[0] = av * s.hs[0];
        phi[1] = av * s.hs[1];
        phi[2] = av * s.hs[2];
        phi[3] = av;
    } else {
        phi[static_cast<std::size_t>(s.cell)] = av;
        phi[4] = av;
    }
    return phi;
}

}  // namespace rbandit

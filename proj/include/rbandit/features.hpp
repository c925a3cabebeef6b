#pragma once

#include <array>
#include <cstddef>

#include "rbandit/numerics.hpp"

namespace rbandit {

enum class EnvKind { heartsteps, chainwalk };

// Binary action: 1 = send the intervention / step right, 0 = hold / step left.
using Action = int;

// Environment state. HeartSteps carries a real 3-vector (weather condition,
// engagement, treatment fatigue); the chain walk an integer cell in {0..3}.
struct State {
    EnvKind env = EnvKind::heartsteps;
    std::array<double, 3> hs{};
    int cell = 0;

    static State heartsteps(double weather, double engagement, double fatigue);
    static State chainwalk(int cell);
};

inline constexpr int kNumActions = 2;
inline constexpr int kChainStates = 4;

std::size_t reward_feature_dim(EnvKind env);  // 8 for both environments
std::size_t policy_feature_dim(EnvKind env);  // 4 heartsteps, 5 chain walk

// Reward-model features x(s, a).
// HeartSteps: [1, s1, s2, s3, a, s1*a, s2*a, s3*a].
// Chain walk: one-hot over the (state, action) pair at index 4*a + cell.
Vector reward_features(const State& s, Action a);

// Policy features phi(s, a); phi(s, 0) == 0 in both environments.
// HeartSteps: [a*s1, a*s2, a*s3, a]. Chain walk: [a*onehot(cell), a].
Vector policy_features(const State& s, Action a);

}  // namespace rbandit

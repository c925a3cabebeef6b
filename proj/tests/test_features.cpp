#include "rbandit/features.hpp"

#include <cmath>

#include "checks.hpp"

using namespace rbandit;

namespace {

void test_heartsteps_reward_features() {
    const State zero = State::heartsteps(0, 0, 0);
    REQUIRE(reward_features(zero, 0) == (Vector{1, 0, 0, 0, 0, 0, 0, 0}));

    const State s = State::heartsteps(1, 2, 3);
    REQUIRE(reward_features(s, 1) == (Vector{1, 1, 2, 3, 1, 1, 2, 3}));
    REQUIRE(reward_features(s, 0) == (Vector{1, 1, 2, 3, 0, 0, 0, 0}));
    REQUIRE(reward_features(s, 1).size() == reward_feature_dim(EnvKind::heartsteps));
    test_ok("heartsteps reward features");
}

void test_chainwalk_reward_features() {
    // One-hot over the (state, action) pair: index 4*a + cell.
    Vector expect(8, 0.0);
    expect[6] = 1.0;
    REQUIRE(reward_features(State::chainwalk(2), 1) == expect);

    for (int cell = 0; cell < kChainStates; ++cell) {
        for (Action a = 0; a < kNumActions; ++a) {
            const Vector x = reward_features(State::chainwalk(cell), a);
            double sum = 0.0;
            for (double v : x) sum += v;
            REQUIRE(sum == 1.0);
            REQUIRE(x[static_cast<std::size_t>(4 * a + cell)] == 1.0);
        }
    }
    test_ok("chainwalk reward features");
}

void test_policy_features() {
    const State s = State::heartsteps(1, 2, 3);
    REQUIRE(policy_features(s, 1) == (Vector{1, 2, 3, 1}));
    REQUIRE(policy_features(s, 0) == (Vector{0, 0, 0, 0}));

    REQUIRE(policy_features(State::chainwalk(0), 1) == (Vector{1, 0, 0, 0, 1}));
    REQUIRE(policy_features(State::chainwalk(3), 0) == (Vector{0, 0, 0, 0, 0}));
    REQUIRE(policy_features(s, 1).size() == policy_feature_dim(EnvKind::heartsteps));
    REQUIRE(policy_feature_dim(EnvKind::chainwalk) == 5);
    test_ok("policy features");
}

void test_action_zero_annihilates_phi() {
    RngStream rng(3, 3);
    for (int rep = 0; rep < 50; ++rep) {
        const State s = State::heartsteps(gauss(rng, 0, 4), gauss(rng, 0, 4), gauss(rng, 0, 4));
        for (double v : policy_features(s, 0)) REQUIRE(v == 0.0);
        const State c = State::chainwalk(static_cast<int>(rng.next_below(4)));
        for (double v : policy_features(c, 0)) REQUIRE(v == 0.0);
    }
    test_ok("phi(s, 0) vanishes");
}

void test_validation() {
    REQUIRE_THROWS(State::heartsteps(std::nan(""), 0, 0), InputError);
    REQUIRE_THROWS(State::chainwalk(4), InputError);
    REQUIRE_THROWS(State::chainwalk(-1), InputError);
    REQUIRE_THROWS(reward_features(State::heartsteps(0, 0, 0), 2), InputError);
    REQUIRE_THROWS(policy_features(State::chainwalk(1), -1), InputError);
    test_ok("feature input validation");
}

}  // namespace

int main() {
    test_heartsteps_reward_features();
    test_chainwalk_reward_features();
    test_policy_features();
    test_action_zero_annihilates_phi();
    test_validation();
    std::puts("features: all tests passed");
    return 0;
}

#include "rbandit/eval.hpp"

#include <cmath>

#include "checks.hpp"

using namespace rbandit;

namespace {

// Environment whose reward is a constant c regardless of state and action.
EnvModel constant_reward_env(double c) {
    HeartstepsParams p;
    p.beta = {0, 0, 0, 0, 0, 0, c, 0, 0, 0, 0, 0, 1.0};
    p.state_noise_var = 0.0;
    p.reward_noise_var = 0.0;
    p.init_cov = Matrix(3, 3);
    return EnvModel::make_heartsteps(p);
}

EnvModel noiseless_env() {
    HeartstepsParams p;
    p.state_noise_var = 0.0;
    p.reward_noise_var = 0.0;
    p.init_cov = Matrix(3, 3);
    return EnvModel::make_heartsteps(p);
}

void test_constant_environment() {
    const EnvModel env = constant_reward_env(42.0);
    Policy pol{EnvKind::heartsteps, {1, -2, 3, -4}};
    RngStream s(1, 0);
    REQUIRE(average_reward(pol, env, 100, 10, s) == 42.0);

    // Protocol-sized run.
    RngStream s2(1, 1);
    REQUIRE(average_reward(pol, env, 5000, 1000, s2) == 42.0);
    test_ok("constant-reward environment");
}

void test_average_reward_determinism() {
    const EnvModel env = EnvModel::make_heartsteps();
    Policy pol{EnvKind::heartsteps, {0.1, -0.2, 0.3, 0.4}};
    RngStream a(2, 5), b(2, 5);
    const double ra = average_reward(pol, env, 400, 100, a);
    const double rb = average_reward(pol, env, 400, 100, b);
    REQUIRE(ra == rb);

    RngStream c(3, 5);
    REQUIRE(average_reward(pol, env, 400, 100, c) != ra);

    RngStream d(2, 5);
    REQUIRE_THROWS(average_reward(pol, env, 100, 100, d), InputError);
    test_ok("tail-average determinism");
}

void test_elrar_aggregation() {
    {
        std::vector<Policy> pols{Policy::uniform(EnvKind::heartsteps)};
        std::vector<EnvModel> envs{constant_reward_env(10.0)};
        std::vector<RngStream> streams{RngStream(4, 0)};
        const EvalReport rep = elrar(pols, envs, 200, 50, streams);
        REQUIRE(rep.per_user.size() == 1);
        REQUIRE(rep.elrar == rep.per_user[0]);
        REQUIRE(rep.elrar == 10.0);
    }
    {
        std::vector<Policy> pols(2, Policy::uniform(EnvKind::heartsteps));
        std::vector<EnvModel> envs{constant_reward_env(10.0), constant_reward_env(20.0)};
        std::vector<RngStream> streams{RngStream(4, 1), RngStream(4, 2)};
        const EvalReport rep = elrar(pols, envs, 200, 50, streams);
        REQUIRE(rep.elrar == 15.0);
        REQUIRE(rep.horizon == 200 && rep.burn_in == 50);
    }
    {
        std::vector<Policy> pols(2, Policy::uniform(EnvKind::heartsteps));
        std::vector<EnvModel> envs{constant_reward_env(1.0)};
        std::vector<RngStream> streams{RngStream(4, 3), RngStream(4, 4)};
        REQUIRE_THROWS(elrar(pols, envs, 200, 50, streams), InputError);
    }
    test_ok("elrar aggregation");
}

void test_elrar_seeded_users() {
    const int users = 10;
    std::vector<Policy> pols(users, Policy::uniform(EnvKind::heartsteps));
    std::vector<EnvModel> envs(users, EnvModel::make_heartsteps());
    std::vector<RngStream> s1, s2;
    for (int u = 0; u < users; ++u) {
        s1.emplace_back(9, 100 + u);
        s2.emplace_back(9, 100 + u);
    }
    const EvalReport a = elrar(pols, envs, 600, 200, s1);
    const EvalReport b = elrar(pols, envs, 600, 200, s2);
    REQUIRE(std::isfinite(a.elrar));
    REQUIRE(a.elrar == b.elrar);
    REQUIRE(a.per_user == b.per_user);
    test_ok("seeded multi-user evaluation");
}

void test_send_policy_ordering() {
    // Chronic sending builds fatigue whose reward penalty outweighs the
    // send bonus at stationarity, so the never-send tail average is higher.
    const EnvModel env = noiseless_env();
    const Policy never{EnvKind::heartsteps, {0, 0, 0, 40}};
    const Policy always{EnvKind::heartsteps, {0, 0, 0, -40}};

    RngStream sa(5, 0), sb(5, 1);
    const double eta_never = average_reward(never, env, 1500, 500, sa);
    const double eta_always = average_reward(always, env, 1500, 500, sb);

    REQUIRE(eta_never == 1500.0);
    // Stationary components: s2 -> 0.4/0.7, s3 -> 0.6/0.25.
    const double expect_always =
        500.0 * (3.0 + 0.25 + 0.4 * (0.4 / 0.7) - 0.5 * (0.6 / 0.25));
    REQUIRE_NEAR(eta_always, expect_always, 1e-6);
    REQUIRE(eta_never > eta_always + 300.0);

    // The ordering also holds under the stochastic dynamics.
    const EnvModel noisy = EnvModel::make_heartsteps();
    for (int rep = 0; rep < 10; ++rep) {
        RngStream u1(100 + rep, 0), u2(100 + rep, 1);
        const double n = average_reward(never, noisy, 1500, 500, u1);
        const double a = average_reward(always, noisy, 1500, 500, u2);
        REQUIRE(n > a + 100.0);
    }
    test_ok("send-policy ordering under fatigue");
}

}  // namespace

int main() {
    test_constant_environment();
    test_average_reward_determinism();
    test_elrar_aggregation();
    test_elrar_seeded_users();
    test_send_policy_ordering();
    std::puts("eval: all tests passed");
    return 0;
}

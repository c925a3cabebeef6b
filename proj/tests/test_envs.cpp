#include "rbandit/envs.hpp"

#include <cmath>
#include <filesystem>

#include "checks.hpp"

using namespace rbandit;

namespace {

HeartstepsParams noiseless_params() {
    HeartstepsParams p;
    p.state_noise_var = 0.0;
    p.reward_noise_var = 0.0;
    p.init_cov = Matrix(3, 3);
    return p;
}

bool same_trajectory(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].a != b[i].a || a[i].r != b[i].r) return false;
        if (a[i].s.env != b[i].s.env) return false;
        if (a[i].s.env == EnvKind::heartsteps) {
            if (a[i].s.hs != b[i].s.hs) return false;
        } else if (a[i].s.cell != b[i].s.cell) {
            return false;
        }
    }
    return true;
}

void test_heartsteps_noiseless_step() {
    const HeartstepsParams p = noiseless_params();
    RngStream stream(1, 0);

    // Zero state, no previous action: reward is the scaled baseline.
    auto [s0, r0] = heartsteps_step(p, State::heartsteps(0, 0, 0), 0, 0, stream);
    REQUIRE(s0.hs == (std::array<double, 3>{0, 0, 0}));
    REQUIRE(r0 == 1500.0);

    auto [s1, r1] = heartsteps_step(p, State::heartsteps(0, 0, 0), 0, 1, stream);
    REQUIRE(r1 == 1625.0);

    // Unit state with the previous action on: each component follows its
    // recursion (0.4*1, 0.3*1 + 0.4*1, 0.7*1 + 0.05*1 + 0.6*1).
    auto [s2, r2] = heartsteps_step(p, State::heartsteps(1, 1, 1), 1, 0, stream);
    REQUIRE_NEAR(s2.hs[0], 0.4, 1e-15);
    REQUIRE_NEAR(s2.hs[1], 0.7, 1e-15);
    REQUIRE_NEAR(s2.hs[2], 1.35, 1e-15);
    // Reward at that state without sending: 500*(3 + 0.1*0.4 - 0.5*1.35).
    REQUIRE_NEAR(r2, 500.0 * (3.0 + 0.1 * 0.4 - 0.5 * 1.35), 1e-9);
    test_ok("heartsteps noiseless recursions");
}

void test_heartsteps_init() {
    {
        HeartstepsParams p = noiseless_params();
        RngStream stream(5, 1);
        const State s = heartsteps_init(p, stream);
        REQUIRE(s.hs == (std::array<double, 3>{0, 0, 0}));
    }
    {
        HeartstepsParams p;  // identity covariance
        RngStream a(6, 2), b(6, 2);
        const State sa = heartsteps_init(p, a);
        const State sb = heartsteps_init(p, b);
        REQUIRE(sa.hs == sb.hs);

        RngStream stream(7, 3);
        std::array<double, 3> sum{}, sum_sq{};
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const State s = heartsteps_init(p, stream);
            for (int k = 0; k < 3; ++k) {
                sum[k] += s.hs[k];
                sum_sq[k] += s.hs[k] * s.hs[k];
            }
        }
        for (int k = 0; k < 3; ++k) {
            const double mean = sum[k] / n;
            const double var = sum_sq[k] / n - mean * mean;
            REQUIRE(std::abs(var - 1.0) <= 0.05);
        }
    }
    {
        HeartstepsParams p;
        p.init_cov = Matrix(3, 3, {1, 2, 0, 2, 1, 0, 0, 0, 1});  // indefinite
        RngStream stream(8, 0);
        REQUIRE_THROWS(heartsteps_init(p, stream), InputError);
    }
    test_ok("heartsteps initial state draw");
}

void test_chainwalk_boundaries_and_rewards() {
    ChainWalkParams sure;
    sure.move_success_prob = 1.0;
    RngStream stream(9, 0);

    auto [left_edge, r_left] = chainwalk_step(sure, State::chainwalk(0), 0, stream);
    REQUIRE(left_edge.cell == 0);
    REQUIRE(r_left == 0.0);

    auto [mid, r_mid] = chainwalk_step(sure, State::chainwalk(1), 1, stream);
    REQUIRE(mid.cell == 2);
    REQUIRE(r_mid == 100.0);

    auto [right_edge, r_right] = chainwalk_step(sure, State::chainwalk(3), 1, stream);
    REQUIRE(right_edge.cell == 3);
    REQUIRE(r_right == 0.0);

    ChainWalkParams bad;
    bad.move_success_prob = 0.4;
    REQUIRE_THROWS(chainwalk_step(bad, State::chainwalk(0), 0, stream), InputError);
    test_ok("chainwalk boundaries and rewards");
}

void test_chainwalk_transition_frequencies() {
    const ChainWalkParams p;
    RngStream stream(10, 0);
    const int n = 100000;
    int forward = 0;
    for (int i = 0; i < n; ++i) {
        auto [next, r] = chainwalk_step(p, State::chainwalk(1), 1, stream);
        if (next.cell == 2) {
            ++forward;
        } else {
            REQUIRE(next.cell == 0);
        }
    }
    const double freq = static_cast<double>(forward) / n;
    REQUIRE(std::abs(freq - 0.9) <= 0.01);
    test_ok("chainwalk transition frequencies");
}

void test_generate_trajectory() {
    const EnvModel env = EnvModel::make_heartsteps();
    const Policy uniform = Policy::uniform(EnvKind::heartsteps);
    {
        RngStream a(11, 0), b(11, 0);
        const Trajectory one = generate_trajectory(env, uniform, 1, a);
        REQUIRE(one.size() == 1);
        const State init = heartsteps_init(env.heartsteps, b);
        REQUIRE(one[0].s.hs == init.hs);
    }
    {
        RngStream a(12, 0), b(12, 0);
        const Trajectory t1 = generate_trajectory(env, uniform, 50, a);
        const Trajectory t2 = generate_trajectory(env, uniform, 50, b);
        REQUIRE(same_trajectory(t1, t2));
    }
    {
        RngStream stream(13, 0);
        const Trajectory t = generate_trajectory(env, uniform, 10000, stream);
        double sends = 0;
        for (const Tuple& tup : t) sends += tup.a;
        REQUIRE(std::abs(sends / 10000.0 - 0.5) <= 0.02);
    }
    RngStream err_stream(1, 1);
    REQUIRE_THROWS(generate_trajectory(env, uniform, 0, err_stream), InputError);
    test_ok("trajectory generation");
}

void test_inject_outliers() {
    const EnvModel env = EnvModel::make_heartsteps();
    RngStream gen(14, 0);
    const Trajectory traj =
        generate_trajectory(env, Policy::uniform(EnvKind::heartsteps), 100, gen);

    {
        RngStream s(15, 0);
        REQUIRE(same_trajectory(inject_outliers(traj, {0.0, 5.0}, s), traj));
        REQUIRE(same_trajectory(inject_outliers(traj, {0.5, 0.0}, s), traj));
    }
    {
        RngStream s(16, 0);
        const Trajectory out = inject_outliers(traj, {0.04, 5.0}, s);
        double mean_reward = 0.0;
        for (const Tuple& t : traj) mean_reward += t.r;
        mean_reward /= traj.size();

        int changed = 0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            REQUIRE(out[i].s.hs == traj[i].s.hs);
            REQUIRE(out[i].a == traj[i].a);
            if (out[i].r != traj[i].r) {
                ++changed;
                REQUIRE_NEAR(out[i].r - traj[i].r, 5.0 * mean_reward, 1e-9);
                REQUIRE(traj[i].a == 1);  // corruption lands on intervention tuples
            }
        }
        REQUIRE(changed == 4);
    }
    {
        // ceil(0.031 * 100) = 4 corrupted tuples.
        RngStream s(17, 0);
        const Trajectory out = inject_outliers(traj, {0.031, 5.0}, s);
        int changed = 0;
        for (std::size_t i = 0; i < traj.size(); ++i) changed += out[i].r != traj[i].r;
        REQUIRE(changed == 4);
    }
    {
        // Spill-over when there are fewer intervention tuples than targets.
        Trajectory no_sends = traj;
        for (Tuple& t : no_sends) t.a = 0;
        RngStream s(18, 0);
        const Trajectory out = inject_outliers(no_sends, {0.1, 5.0}, s);
        int changed = 0;
        for (std::size_t i = 0; i < out.size(); ++i) changed += out[i].r != no_sends[i].r;
        REQUIRE(changed == 10);
    }
    {
        RngStream s(19, 0);
        REQUIRE_THROWS(inject_outliers(traj, {1.5, 5.0}, s), InputError);
        REQUIRE_THROWS(inject_outliers(traj, {0.1, -1.0}, s), InputError);
    }
    test_ok("outlier injection");
}

void test_trajectory_csv_round_trip() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rbandit_env_tests";
    fs::create_directories(dir);

    {
        const EnvModel env = EnvModel::make_heartsteps();
        RngStream s(20, 0);
        const Trajectory traj =
            generate_trajectory(env, Policy::uniform(EnvKind::heartsteps), 25, s);
        const fs::path path = dir / "hs.csv";
        write_trajectory_csv(path, traj);
        REQUIRE(same_trajectory(read_trajectory_csv(path, EnvKind::heartsteps), traj));
        REQUIRE_THROWS(read_trajectory_csv(path, EnvKind::chainwalk), InputError);
    }
    {
        const EnvModel env = EnvModel::make_chainwalk();
        RngStream s(21, 0);
        const Trajectory traj =
            generate_trajectory(env, Policy::uniform(EnvKind::chainwalk), 25, s);
        const fs::path path = dir / "cw.csv";
        write_trajectory_csv(path, traj);
        REQUIRE(same_trajectory(read_trajectory_csv(path, EnvKind::chainwalk), traj));
    }
    REQUIRE_THROWS(read_trajectory_csv(dir / "missing.csv", EnvKind::heartsteps), InputError);
    test_ok("trajectory csv round trip");
}

}  // namespace

int main() {
    test_heartsteps_noiseless_step();
    test_heartsteps_init();
    test_chainwalk_boundaries_and_rewards();
    test_chainwalk_transition_frequencies();
    test_generate_trajectory();
    test_inject_outliers();
    test_trajectory_csv_round_trip();
    std::puts("envs: all tests passed");
    return 0;
}

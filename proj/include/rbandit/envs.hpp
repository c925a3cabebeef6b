#pragma once

#include <array>
#include <filesystem>
#include <utility>

#include "rbandit/actor.hpp"

namespace rbandit {

// Simulated mobile-health study dynamics. State components follow linear
// recursions driven by the previous action; the reward mixes a baseline, an
// action effect gated by the first two components, and a fatigue penalty.
struct HeartstepsParams {
    std::array<double, 13> beta{0.4, 0.3, 0.4, 0.7, 0.05, 0.6, 3.0,
                                0.25, 0.25, 0.4, 0.1, 0.5, 500.0};
    double state_noise_var = 1.0;   // per-component transition noise
    double reward_noise_var = 9.0;  // pre-scale reward noise
    Matrix init_cov = Matrix::identity(3);  // covariance of the initial state
};

// Four-cell chain: action 1 tries to move right, 0 left; moves saturate at
// the boundary and flip direction with probability 1 - move_success_prob.
// Rewards attach to the cell the walker lands in.
struct ChainWalkParams {
    std::array<double, 4> state_rewards{0.0, 100.0, 100.0, 0.0};
    double move_success_prob = 0.9;  // must lie in (0.5, 1]
};

struct EnvModel {
    EnvKind kind = EnvKind::heartsteps;
    HeartstepsParams heartsteps;
    ChainWalkParams chainwalk;

    static EnvModel make_heartsteps(HeartstepsParams p = {});
    static EnvModel make_chainwalk(ChainWalkParams p = {});
};

// Initial state draw: N(0, init_cov). Always consumes three Gaussian draws.
State heartsteps_init(const HeartstepsParams& params, RngStream& stream);

// Next state from (prev, a_prev); consumes three Gaussian draws.
State heartsteps_transition(const HeartstepsParams& params, const State& prev,
                            Action a_prev, RngStream& stream);

// Reward of taking action a in state s; consumes one Gaussian draw.
double heartsteps_reward(const HeartstepsParams& params, const State& s,
                         Action a, RngStream& stream);

// Transition from (prev, a_prev), then the reward of taking a_cur in the new
// state. With all noise variances zero the map is deterministic.
std::pair<State, double> heartsteps_step(const HeartstepsParams& params,
                                         const State& prev, Action a_prev,
                                         Action a_cur, RngStream& stream);

// Uniform initial cell.
State chainwalk_init(const ChainWalkParams& params, RngStream& stream);

// One noisy move; returns the landing state and its reward.
std::pair<State, double> chainwalk_step(const ChainWalkParams& params,
                                        const State& s, Action a,
                                        RngStream& stream);

// Stateful rollout wrapper. Each step consumes a fixed number of stream
// words regardless of the action taken, so seeded runs replay exactly and
// rollouts sharing a stream stay aligned.
class EnvSim {
public:
    EnvSim(const EnvModel& model, RngStream& stream);

    const State& state() const { return state_; }

    // Reward of taking a in the current state; then advances the state.
    double step(Action a);

private:
    const EnvModel* model_;
    RngStream* stream_;
    State state_;
};

// Draws an action from the policy given the state (one stream word).
Action sample_action(const Policy& policy, const State& s, RngStream& stream);

// Rolls the environment forward, drawing actions from the behavior policy,
// and records one (state, action, reward) tuple per decision point.
Trajectory generate_trajectory(const EnvModel& model, const Policy& behavior,
                               std::size_t decision_points, RngStream& stream);

// Reward corruption: ceil(psi * M) distinct tuples get nu times the average
// reward of the clean trajectory added to their reward. Corruption targets
// intervention tuples (a = 1), spilling over to the rest only when there are
// not enough of them.
struct OutlierSpec {
    double psi = 0.04;  // fraction of tuples to corrupt
    double nu = 5.0;    // spike strength
};

// States, actions and tuple order are untouched; psi == 0 or nu == 0 returns
// the input unchanged without consuming the stream.
Trajectory inject_outliers(const Trajectory& traj, const OutlierSpec& spec,
                           RngStream& stream);

// Trajectory CSV: header "t,s1,s2,s3,a,r" (heartsteps) or "t,s,a,r" (chain
// walk), one row per decision point, round-trip exact.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path, EnvKind env);

}  // namespace rbandit

#include "rbandit/envs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace rbandit {

namespace {

void require_chainwalk_params(const ChainWalkParams& p) {
    if (!(p.move_success_prob > 0.5 && p.move_success_prob <= 1.0)) {
        throw InputError("chain walk: move_success_prob must lie in (0.5, 1]");
    }
}

// Lower-triangular factor of a symmetric PSD matrix; rank-deficient pivots
// produce zero columns so degenerate covariances (including 0) are allowed.
Matrix psd_factor(const Matrix& cov) {
    const std::size_t n = cov.rows();
    if (cov.cols() != n) throw InputError("covariance must be square");
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(cov(i, j))) throw InputError("covariance must be finite");
            scale = std::max(scale, std::abs(cov(i, j)));
            if (std::abs(cov(i, j) - cov(j, i)) > 1e-10 * scale) {
                throw InputError("covariance must be symmetric");
            }
        }
    }
    const double tol = 1e-12 * scale;
    Matrix l(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double pivot = cov(k, k);
        for (std::size_t j = 0; j < k; ++j) pivot -= l(k, j) * l(k, j);
        if (pivot < -tol) throw InputError("covariance is not positive semidefinite");
        if (pivot <= tol) continue;  // zero column
        const double diag = std::sqrt(pivot);
        l(k, k) = diag;
        for (std::size_t i = k + 1; i < n; ++i) {
            double sum = cov(i, k);
            for (std::size_t j = 0; j < k; ++j) sum -= l(i, j) * l(k, j);
            l(i, k) = sum / diag;
        }
    }
    return l;
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

double parse_double(const std::string& field, const std::filesystem::path& path) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw InputError("malformed number '" + field + "' in " + path.string());
    }
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

EnvModel EnvModel::make_heartsteps(HeartstepsParams p) {
    EnvModel m;
    m.kind = EnvKind::heartsteps;
    m.heartsteps = std::move(p);
    return m;
}

EnvModel EnvModel::make_chainwalk(ChainWalkParams p) {
    EnvModel m;
    m.kind = EnvKind::chainwalk;
    m.chainwalk = p;
    return m;
}

State heartsteps_init(const HeartstepsParams& params, RngStream& stream) {
    if (params.init_cov.rows() != 3 || params.init_cov.cols() != 3) {
        throw InputError("heartsteps: init_cov must be 3x3");
    }
    const Matrix l = psd_factor(params.init_cov);
    std::array<double, 3> z{};
    for (double& zi : z) zi = gauss(stream, 0.0, 1.0);
    std::array<double, 3> s{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j <= i; ++j) s[i] += l(i, j) * z[j];
    }
    return State::heartsteps(s[0], s[1], s[2]);
}

State heartsteps_transition(const HeartstepsParams& params, const State& prev,
                            Action a_prev, RngStream& stream) {
    if (prev.env != EnvKind::heartsteps) throw InputError("heartsteps: wrong state kind");
    if (a_prev != 0 && a_prev != 1) throw InputError("heartsteps: action must be 0 or 1");
    if (params.state_noise_var < 0.0) throw InputError("heartsteps: negative state noise");

    const auto& b = params.beta;
    const double a = static_cast<double>(a_prev);
    const double s1 = b[0] * prev.hs[0] + gauss(stream, 0.0, params.state_noise_var);
    const double s2 = b[1] * prev.hs[1] + b[2] * a + gauss(stream, 0.0, params.state_noise_var);
    const double s3 = b[3] * prev.hs[2] + b[4] * prev.hs[2] * a + b[5] * a +
                      gauss(stream, 0.0, params.state_noise_var);
    return State::heartsteps(s1, s2, s3);
}

double heartsteps_reward(const HeartstepsParams& params, const State& s,
                         Action a, RngStream& stream) {
    if (s.env != EnvKind::heartsteps) throw InputError("heartsteps: wrong state kind");
    if (a != 0 && a != 1) throw InputError("heartsteps: action must be 0 or 1");
    if (params.reward_noise_var < 0.0) throw InputError("heartsteps: negative reward noise");

    const auto& b = params.beta;
    const double av = static_cast<double>(a);
    const double noise = gauss(stream, 0.0, params.reward_noise_var);
    return b[12] * (b[6] + av * (b[7] + b[8] * s.hs[0] + b[9] * s.hs[1]) +
                    b[10] * s.hs[0] - b[11] * s.hs[2] + noise);
}

std::pair<State, double> heartsteps_step(const HeartstepsParams& params,
                                         const State& prev, Action a_prev,
                                         Action a_cur, RngStream& stream) {
    State next = heartsteps_transition(params, prev, a_prev, stream);
    const double r = heartsteps_reward(params, next, a_cur, stream);
    return {next, r};
}

State chainwalk_init(const ChainWalkParams& params, RngStream& stream) {
    require_chainwalk_params(params);
    return State::chainwalk(static_cast<int>(stream.next_below(kChainStates)));
}

std::pair<State, double> chainwalk_step(const ChainWalkParams& params,
                                        const State& s, Action a,
                                        RngStream& stream) {
    require_chainwalk_params(params);
    if (s.env != EnvKind::chainwalk) throw InputError("chain walk: wrong state kind");
    if (a != 0 && a != 1) throw InputError("chain walk: action must be 0 or 1");

    const bool success = stream.next_unit() < params.move_success_prob;
    int dir = (a == 1) ? 1 : -1;
    if (!success) dir = -dir;
    const int landed = std::clamp(s.cell + dir, 0, kChainStates - 1);
    return {State::chainwalk(landed),
            params.state_rewards[static_cast<std::size_t>(landed)]};
}

EnvSim::EnvSim(const EnvModel& model, RngStream& stream)
    : model_(&model), stream_(&stream) {
    state_ = model.kind == EnvKind::heartsteps
                 ? heartsteps_init(model.heartsteps, stream)
                 : chainwalk_init(model.chainwalk, stream);
}

double EnvSim::step(Action a) {
    if (model_->kind == EnvKind::heartsteps) {
        const double r = heartsteps_reward(model_->heartsteps, state_, a, *stream_);
        state_ = heartsteps_transition(model_->heartsteps, state_, a, *stream_);
        return r;
    }
    auto [next, r] = chainwalk_step(model_->chainwalk, state_, a, *stream_);
    state_ = next;
    return r;
}

Action sample_action(const Policy& policy, const State& s, RngStream& stream) {
    const double p1 = policy_prob(policy, s)[1];
    return stream.next_unit() < p1 ? 1 : 0;
}

Trajectory generate_trajectory(const EnvModel& model, const Policy& behavior,
                               std::size_t decision_points, RngStream& stream) {
    if (decision_points == 0) throw InputError("generate_trajectory: need at least one decision point");
    Trajectory traj;
    traj.reserve(decision_points);
    EnvSim sim(model, stream);
    for (std::size_t t = 0; t < decision_points; ++t) {
        const State s = sim.state();
        const Action a = sample_action(behavior, s, stream);
        const double r = sim.step(a);
        traj.push_back(Tuple{s, a, r});
    }
    return traj;
}

Trajectory inject_outliers(const Trajectory& traj, const OutlierSpec& spec,
                           RngStream& stream) {
    if (!(spec.psi >= 0.0 && spec.psi <= 1.0)) throw InputError("inject_outliers: psi must lie in [0, 1]");
    if (!(spec.nu >= 0.0)) throw InputError("inject_outliers: nu must be >= 0");

    Trajectory out = traj;
    if (spec.psi == 0.0 || spec.nu == 0.0 || traj.empty()) return out;

    const std::size_t m = traj.size();
    // Guard the ceil against representation error in psi * m.
    auto corrupt_count = static_cast<std::size_t>(
        std::ceil(spec.psi * static_cast<double>(m) - 1e-9));
    corrupt_count = std::min(corrupt_count, m);
    if (corrupt_count == 0) return out;

    double mean_reward = 0.0;
    for (const Tuple& tup : traj) mean_reward += tup.r;
    mean_reward /= static_cast<double>(m);
    const double spike = spec.nu * mean_reward;

    // Intervention tuples are the corruption targets: their recorded
    // responses are the ones the collection pipeline mangles. Only when the
    // trajectory has too few of them does the remainder get hit.
    std::vector<std::size_t> idx;
    idx.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (traj[i].a == 1) idx.push_back(i);
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (traj[i].a != 1) idx.push_back(i);
    }
    const std::size_t sends = static_cast<std::size_t>(
        std::count_if(traj.begin(), traj.end(), [](const Tuple& t) { return t.a == 1; }));

    // Partial Fisher-Yates within each group: the first corrupt_count slots
    // end up holding the chosen distinct indices.
    const std::size_t from_sends = std::min(corrupt_count, sends);
    for (std::size_t i = 0; i < from_sends; ++i) {
        const std::size_t j =
            i + stream.next_below(static_cast<std::uint32_t>(sends - i));
        std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = from_sends; i < corrupt_count; ++i) {
        const std::size_t j =
            i + stream.next_below(static_cast<std::uint32_t>(m - i));
        std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < corrupt_count; ++i) {
        out[idx[i]].r += spike;
    }
    return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    if (traj.empty()) throw InputError("write_trajectory_csv: empty trajectory");
    const EnvKind env = traj.front().s.env;

    std::string body = env == EnvKind::heartsteps ? "t,s1,s2,s3,a,r\n" : "t,s,a,r\n";
    for (std::size_t t = 0; t < traj.size(); ++t) {
        const Tuple& tup = traj[t];
        body += std::to_string(t);
        body += ',';
        if (env == EnvKind::heartsteps) {
            for (double v : tup.s.hs) {
                append_double(body, v);
                body += ',';
            }
        } else {
            body += std::to_string(tup.s.cell);
            body += ',';
        }
        body += std::to_string(tup.a);
        body += ',';
        append_double(body, tup.r);
        body += '\n';
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << body)) {
        throw IoError("write_trajectory_csv: cannot write " + path.string());
    }
}

Trajectory read_trajectory_csv(const std::filesystem::path& path, EnvKind env) {
    std::ifstream in(path);
    if (!in) throw InputError("read_trajectory_csv: cannot open " + path.string());

    const std::string expected_header =
        env == EnvKind::heartsteps ? "t,s1,s2,s3,a,r" : "t,s,a,r";
    std::string line;
    if (!std::getline(in, line) || line != expected_header) {
        throw InputError("read_trajectory_csv: unexpected header in " + path.string());
    }

    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const std::size_t expected = env == EnvKind::heartsteps ? 6u : 4u;
        if (fields.size() != expected) {
            throw InputError("read_trajectory_csv: malformed row in " + path.string());
        }
        Tuple tup;
        if (env == EnvKind::heartsteps) {
            tup.s = State::heartsteps(parse_double(fields[1], path),
                                      parse_double(fields[2], path),
                                      parse_double(fields[3], path));
            tup.a = static_cast<Action>(parse_double(fields[4], path));
            tup.r = parse_double(fields[5], path);
        } else {
            tup.s = State::chainwalk(static_cast<int>(parse_double(fields[1], path)));
            tup.a = static_cast<Action>(parse_double(fields[2], path));
            tup.r = parse_double(fields[3], path);
        }
        traj.push_back(tup);
    }
    if (traj.empty()) throw InputError("read_trajectory_csv: no rows in " + path.string());
    return traj;
}

}  // namespace rbandit

#include "rbandit/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rbandit {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_num(const std::string& s, const std::string& key) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw InputError("config: malformed number '" + s + "' for key '" + key + "'");
    }
    return v;
}

std::vector<double> parse_num_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(parse_num(item, key));
    if (out.empty()) throw InputError("config: empty list for key '" + key + "'");
    return out;
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

EnvModel build_env(const ExperimentConfig& cfg) {
    if (cfg.dataset == EnvKind::chainwalk) {
        ChainWalkParams p;
        p.move_success_prob = cfg.chainwalk_success_prob;
        return EnvModel::make_chainwalk(p);
    }
    HeartstepsParams p;
    if (cfg.heartsteps_init_cov_diag.size() != 3) {
        throw InputError("config: heartsteps_init_cov_diag needs exactly 3 entries");
    }
    p.init_cov = Matrix(3, 3);
    for (std::size_t i = 0; i < 3; ++i) p.init_cov(i, i) = cfg.heartsteps_init_cov_diag[i];
    return EnvModel::make_heartsteps(p);
}

// Stream ids per simulated user: trajectory noise + behavior actions,
// outlier index selection, evaluation rollout.
enum StreamRole : std::uint64_t { kTrainStream = 0, kInjectStream = 1, kEvalStream = 2 };

std::uint64_t stream_id(std::size_t user, StreamRole role) {
    return 3 * static_cast<std::uint64_t>(user) + role;
}

ResultRow run_cell(const ExperimentConfig& cfg, const EnvModel& env, Method method,
                   double psi, double nu, double tau, std::uint64_t seed) {
    const Policy behavior = Policy::uniform(cfg.dataset);
    const OutlierSpec outliers{psi, nu};
    const TrainSettings settings{cfg.zeta_a, cfg.zeta_c, tau};

    double eta_sum = 0.0;
    std::uint64_t iters = 0;
    std::uint64_t detected = 0;
    for (std::size_t user = 0; user < cfg.users; ++user) {
        RngStream train_stream(seed, stream_id(user, kTrainStream));
        RngStream inject_stream(seed, stream_id(user, kInjectStream));
        RngStream eval_stream(seed, stream_id(user, kEvalStream));

        Trajectory traj = generate_trajectory(env, behavior, cfg.decision_points, train_stream);
        traj = inject_outliers(traj, outliers, inject_stream);

        const TrainOutcome outcome = train_policy(traj, method, settings);
        eta_sum += average_reward(outcome.policy, env, cfg.horizon, cfg.burn_in, eval_stream);
        iters += static_cast<std::uint64_t>(outcome.critic_iters);
        detected += static_cast<std::uint64_t>(outcome.outliers_detected);
    }

    ResultRow row;
    row.experiment = to_string(cfg.id);
    row.dataset = to_string(cfg.dataset);
    row.method = to_string(method);
    row.psi = psi;
    row.nu = nu;
    row.tau = tau;
    row.seed = seed;
    row.elrar = eta_sum / static_cast<double>(cfg.users);
    row.critic_iters = iters;
    row.outliers_detected = detected;
    return row;
}

void require_config(const ExperimentConfig& cfg) {
    if (cfg.methods.empty()) throw InputError("experiment: methods list must not be empty");
    if (cfg.psi_grid.empty() || cfg.nu_grid.empty() || cfg.tau_grid.empty()) {
        throw InputError("experiment: sweep grids must not be empty");
    }
    if (cfg.seeds.empty()) throw InputError("experiment: seeds list must not be empty");
    if (cfg.users == 0) throw InputError("experiment: users must be >= 1");
    if (cfg.decision_points == 0) throw InputError("experiment: decision_points must be >= 1");
    if (cfg.horizon <= cfg.burn_in) throw InputError("experiment: horizon must exceed burn_in");
    for (double tau : cfg.tau_grid) {
        if (!(tau > 0.0)) throw InputError("experiment: tau values must be positive");
    }
}

std::vector<ResultRow> run_checked(const ExperimentConfig& cfg, ExperimentId expected) {
    if (cfg.id != expected) {
        throw InputError("experiment id mismatch: config says " + to_string(cfg.id));
    }
    return run_experiment(cfg);
}

}  // namespace

std::string to_string(ExperimentId id) {
    switch (id) {
        case ExperimentId::s1: return "s1";
        case ExperimentId::s2: return "s2";
        case ExperimentId::s3: return "s3";
        case ExperimentId::s4: return "s4";
    }
    return "?";
}

std::string to_string(Method m) {
    switch (m) {
        case Method::accb: return "accb";
        case Method::ro_accb: return "ro-accb";
        case Method::iqr_filter_accb: return "iqr-filter-accb";
    }
    return "?";
}

std::string to_string(EnvKind env) {
    return env == EnvKind::heartsteps ? "heartsteps" : "chainwalk";
}

ExperimentId parse_experiment(const std::string& name) {
    if (name == "s1") return ExperimentId::s1;
    if (name == "s2") return ExperimentId::s2;
    if (name == "s3") return ExperimentId::s3;
    if (name == "s4") return ExperimentId::s4;
    throw InputError("unknown experiment '" + name + "' (expected s1|s2|s3|s4)");
}

Method parse_method(const std::string& name) {
    if (name == "accb") return Method::accb;
    if (name == "ro-accb") return Method::ro_accb;
    if (name == "iqr-filter-accb") return Method::iqr_filter_accb;
    throw InputError("unknown method '" + name + "'");
}

EnvKind parse_dataset(const std::string& name) {
    if (name == "heartsteps") return EnvKind::heartsteps;
    if (name == "chainwalk") return EnvKind::chainwalk;
    throw InputError("unknown dataset '" + name + "' (expected heartsteps|chainwalk)");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentId id, EnvKind dataset) {
    ExperimentConfig cfg;
    cfg.id = id;
    cfg.dataset = dataset;
    switch (id) {
        case ExperimentId::s1:
            break;
        case ExperimentId::s2:
            cfg.psi_grid = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09};
            break;
        case ExperimentId::s3:
            cfg.nu_grid = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
            break;
        case ExperimentId::s4:
            cfg.tau_grid = dataset == EnvKind::heartsteps
                               ? std::vector<double>{0.1, 0.2, 0.5, 1, 2, 4, 8}
                               : std::vector<double>{0.2, 0.5, 1, 2, 4};
            break;
    }
    return cfg;
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError("config: line " + std::to_string(line_no) +
                             " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw InputError("config: empty value for key '" + key + "'");

        if (key == "methods") {
            config.methods.clear();
            for (const auto& item : split_list(value)) config.methods.push_back(parse_method(item));
        } else if (key == "psi") {
            config.psi_grid = parse_num_list(value, key);
        } else if (key == "nu") {
            config.nu_grid = parse_num_list(value, key);
        } else if (key == "tau") {
            config.tau_grid = parse_num_list(value, key);
        } else if (key == "seeds") {
            config.seeds.clear();
            for (double v : parse_num_list(value, key)) {
                config.seeds.push_back(static_cast<std::uint64_t>(v));
            }
        } else if (key == "users") {
            config.users = static_cast<std::size_t>(parse_num(value, key));
        } else if (key == "decision_points") {
            config.decision_points = static_cast<std::size_t>(parse_num(value, key));
        } else if (key == "zeta_a") {
            config.zeta_a = parse_num(value, key);
        } else if (key == "zeta_c") {
            config.zeta_c = parse_num(value, key);
        } else if (key == "horizon") {
            config.horizon = static_cast<std::size_t>(parse_num(value, key));
        } else if (key == "burn_in") {
            config.burn_in = static_cast<std::size_t>(parse_num(value, key));
        } else if (key == "chainwalk_success_prob") {
            config.chainwalk_success_prob = parse_num(value, key);
        } else if (key == "heartsteps_init_cov_diag") {
            config.heartsteps_init_cov_diag = parse_num_list(value, key);
        } else if (key == "out") {
            config.out_path = value;
        } else {
            throw InputError("config: unknown key '" + key + "'");
        }
    }
}

TrainOutcome train_policy(const Trajectory& traj, Method method,
                          const TrainSettings& settings) {
    TrainOutcome out;
    switch (method) {
        case Method::ro_accb: {
            ActorCriticConfig cfg;
            cfg.zeta_a = settings.zeta_a;
            cfg.zeta_c = settings.zeta_c;
            cfg.tau = settings.tau;
            const ActorCriticResult res = run_actor_critic(traj, cfg);
            out.policy = res.policy;
            out.critic_iters = res.fit.iterations;
            for (std::uint8_t u : res.fit.u_weights) out.outliers_detected += u ? 0 : 1;
            return out;
        }
        case Method::accb: {
            ActorCriticConfig cfg;
            cfg.zeta_a = settings.zeta_a;
            cfg.zeta_c = settings.zeta_c;
            const ActorCriticResult res = run_plain_actor_critic(traj, cfg);
            out.policy = res.policy;
            out.critic_iters = res.fit.iterations;
            return out;
        }
        case Method::iqr_filter_accb: {
            Vector rewards = reward_vector(traj);
            const double q1 = quantile(rewards, 0.25);
            const double q3 = quantile(rewards, 0.75);
            const double fence = q3 + 1.5 * (q3 - q1);
            Trajectory kept;
            kept.reserve(traj.size());
            for (const Tuple& tup : traj) {
                if (tup.r <= fence) kept.push_back(tup);
            }
            out.outliers_detected = static_cast<int>(traj.size() - kept.size());
            const TrainOutcome inner = train_policy(kept, Method::accb, settings);
            out.policy = inner.policy;
            out.critic_iters = inner.critic_iters;
            return out;
        }
    }
    throw InputError("train_policy: unknown method");
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    require_config(cfg);
    const EnvModel env = build_env(cfg);

    std::vector<ResultRow> rows;
    rows.reserve(cfg.methods.size() * cfg.psi_grid.size() * cfg.nu_grid.size() *
                 cfg.tau_grid.size() * cfg.seeds.size());
    for (Method method : cfg.methods) {
        for (double psi : cfg.psi_grid) {
            for (double nu : cfg.nu_grid) {
                for (double tau : cfg.tau_grid) {
                    for (std::uint64_t seed : cfg.seeds) {
                        rows.push_back(run_cell(cfg, env, method, psi, nu, tau, seed));
                    }
                }
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_s1(const ExperimentConfig& cfg) { return run_checked(cfg, ExperimentId::s1); }
std::vector<ResultRow> run_s2(const ExperimentConfig& cfg) { return run_checked(cfg, ExperimentId::s2); }
std::vector<ResultRow> run_s3(const ExperimentConfig& cfg) { return run_checked(cfg, ExperimentId::s3); }
std::vector<ResultRow> run_s4(const ExperimentConfig& cfg) { return run_checked(cfg, ExperimentId::s4); }

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    std::string body =
        "experiment,dataset,method,psi,nu,tau,seed,elrar,critic_iters,outliers_detected\n";
    for (const ResultRow& row : rows) {
        body += row.experiment;
        body += ',';
        body += row.dataset;
        body += ',';
        body += row.method;
        body += ',';
        append_double(body, row.psi);
        body += ',';
        append_double(body, row.nu);
        body += ',';
        append_double(body, row.tau);
        body += ',';
        body += std::to_string(row.seed);
        body += ',';
        append_double(body, row.elrar);
        body += ',';
        body += std::to_string(row.critic_iters);
        body += ',';
        body += std::to_string(row.outliers_detected);
        body += '\n';
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << body)) {
        throw IoError("write_csv: cannot write " + path.string());
    }
    out.flush();
    if (!out) throw IoError("write_csv: cannot write " + path.string());
}

}  // namespace rbandit

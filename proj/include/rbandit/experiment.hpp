#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "rbandit/eval.hpp"

namespace rbandit {

enum class ExperimentId { s1, s2, s3, s4 };

// accb: plain ridge critic, unweighted actor.
// ro_accb: capped critic with the adaptive threshold, weighted actor.
// iqr_filter_accb: drop tuples whose reward exceeds the boxplot fence on raw
// rewards, then run the plain path on the survivors.
enum class Method { accb, ro_accb, iqr_filter_accb };

std::string to_string(ExperimentId id);
std::string to_string(Method m);
std::string to_string(EnvKind env);
ExperimentId parse_experiment(const std::string& name);
Method parse_method(const std::string& name);
EnvKind parse_dataset(const std::string& name);

struct ExperimentConfig {
    ExperimentId id = ExperimentId::s1;
    EnvKind dataset = EnvKind::heartsteps;
    std::vector<Method> methods{Method::accb, Method::ro_accb, Method::iqr_filter_accb};
    std::vector<double> psi_grid{0.04};
    std::vector<double> nu_grid{5.0};
    std::vector<double> tau_grid{1.0};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::size_t users = 50;
    std::size_t decision_points = 210;
    double zeta_a = 1e-3;
    double zeta_c = 1e-3;
    std::size_t horizon = 5000;
    std::size_t burn_in = 1000;
    double chainwalk_success_prob = 0.9;
    Vector heartsteps_init_cov_diag{1.0, 1.0, 1.0};
    std::string out_path = "results.csv";

    // Sweep grids and defaults for one experiment/dataset combination.
    static ExperimentConfig defaults(ExperimentId id, EnvKind dataset);
};

// Applies `key = value` lines (lists comma-separated, '#' comments) over an
// existing config. Unknown keys are errors.
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

struct ResultRow {
    std::string experiment;
    std::string dataset;
    std::string method;
    double psi = 0.0;
    double nu = 0.0;
    double tau = 0.0;
    std::uint64_t seed = 0;
    double elrar = 0.0;
    std::uint64_t critic_iters = 0;        // summed over users
    std::uint64_t outliers_detected = 0;   // summed over users
};

struct TrainSettings {
    double zeta_a = 1e-3;
    double zeta_c = 1e-3;
    double tau = 1.0;
};

struct TrainOutcome {
    Policy policy;
    int critic_iters = 0;
    int outliers_detected = 0;
};

// Trains one user's policy from one (possibly corrupted) trajectory.
TrainOutcome train_policy(const Trajectory& traj, Method method,
                          const TrainSettings& settings);

// Full sweep: one row per (method, grid point, seed), in method, then grid,
// then seed order. Seeded streams make repeated runs identical.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

std::vector<ResultRow> run_s1(const ExperimentConfig& config);
std::vector<ResultRow> run_s2(const ExperimentConfig& config);
std::vector<ResultRow> run_s3(const ExperimentConfig& config);
std::vector<ResultRow> run_s4(const ExperimentConfig& config);

// UTF-8 CSV with a fixed header; numbers use shortest round-trip formatting
// so identical runs produce byte-identical files.
void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

}  // namespace rbandit

#pragma once

#include "pglab/bounds.hpp"
#include "pglab/environments.hpp"
#include "pglab/mdp.hpp"
#include "pglab/optimizer.hpp"
#include "pglab/policy.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pglab {

enum class Parameterization { Direct, Softmax, Custom };

struct RandomMdpSpec {
    int n_states = 6;
    int n_actions = 3;
    MdpKind kind = MdpKind::Continuing;
};

using EnvironmentSpec = std::variant<CarRentalConfig, GridworldConfig, RandomMdpSpec>;

/// Configuration-driven sweep over (gamma, parameterization, seed) cells.
/// budgets and etas are keyed "<parameterization>@<gamma>" with a "default"
/// fallback ("direct@0.9"); etas default to the built-in step-size rules.
struct ExperimentConfig {
    EnvironmentSpec environment = GridworldConfig{};
    std::string environment_name = "gridworld";
    std::vector<double> gammas = {0.9, 0.7, 0.5, 0.3};
    std::vector<Parameterization> parameterizations = {Parameterization::Softmax};
    bool run_pairs = true;
    std::vector<std::uint64_t> seeds = {1};
    std::map<std::string, long> budgets;
    std::map<std::string, double> etas;
    long checkpoint_every = 10;
    std::string output_dir = "runs/out";
    bool emit_plots = true;
    // sample-subcommand extras
    std::vector<long> capacities = {100, 1000, 10000, 100000};
};

ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Step-size rules: softmax (1-gamma)^2/8 (the convergence-theorem cap),
/// direct projected (1-gamma)^3/(2|A|) with backtracking, custom (1-gamma)/4.
double default_eta(Parameterization param, double gamma, int n_actions);
long default_budget(const std::string& environment_name, Parameterization param, double gamma);

struct RunSummary {
    std::string environment;
    Parameterization param = Parameterization::Softmax;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    double j_star = 0.0;
    double j_initial = 0.0;
    double j_final_biased = 0.0;
    double j_final_unbiased = 0.0;
    double gap_biased = 0.0;    ///< |J_final - J*|
    double gap_unbiased = 0.0;
    long iters_biased = 0;
    long iters_unbiased = 0;
    long iters_to_1pct_biased = -1;  ///< first iter within 1% of J*
    long iters_to_1pct_unbiased = -1;
    double mean_abs_j_diff = 0.0;  ///< mean |J_b(t) - J_u(t)| over common range
    TrainStatus status_biased = TrainStatus::MaxIters;
    TrainStatus status_unbiased = TrainStatus::MaxIters;
    bool diverged = false;
};

struct ExperimentReport {
    std::vector<RunSummary> summaries;
    std::vector<std::string> files_written;
    int exit_code = 0;
};

/// Trains biased and unbiased variants per cell, computes J* by value
/// iteration, writes trace CSVs, a summary CSV, bound-report JSONs and
/// optional SVG overlays of the J curves. Divergences are recorded per row and
/// do not abort the sweep. Cells run on a pool of PGLAB_THREADS workers.
ExperimentReport run_reproduction(const ExperimentConfig& config);

/// Per (environment, gamma): constants over 100 random policies plus logged
/// training iterates, measured ratios, bound values and pass/fail margins,
/// written as JSON reports plus a flat CSV summary row per gamma.
ExperimentReport run_bounds_suite(const ExperimentConfig& config);

/// Buffer convergence curves per seed, written as CSV.
ExperimentReport run_sample_suite(const ExperimentConfig& config);

/// Built-in paper-reproduction configs: fig1 (car rental, direct), fig2 (car
/// rental, softmax), fig3 (gridworld, direct), fig4 (gridworld, softmax),
/// appendixA3 (gridworld, shared-logit custom).
ExperimentConfig builtin_config(const std::string& name, const std::string& out_dir,
                                std::uint64_t seed);

Mdp build_environment(const EnvironmentSpec& spec, double gamma, std::uint64_t seed = 0);

/// Worker-pool width: PGLAB_THREADS when set, hardware concurrency otherwise.
int thread_width();

/// Seeded softmax probe policies with N(0,1) logits, for bound certification.
std::vector<Policy> random_probe_policies(const Mdp& mdp, int count, std::uint64_t seed);

std::string summary_csv(const std::vector<RunSummary>& summaries);
std::string bound_report_json(const BoundReport& report, const std::string& environment);
std::string bound_reports_csv(const std::vector<BoundReport>& reports,
                              const std::string& environment);

}  // namespace pglab

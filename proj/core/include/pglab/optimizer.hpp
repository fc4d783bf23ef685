#pragma once

#include "pglab/mdp.hpp"
#include "pglab/policy.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pglab {

enum class TrainVariant { DirectProjected, SoftmaxAscent, CustomAscent };

struct TrainConfig {
    TrainVariant variant = TrainVariant::SoftmaxAscent;
    bool use_biased = true;
    double eta = 0.0;
    long max_iters = 1;
    double stop_grad_norm = 1e-8;
    std::optional<double> gamma_override;
    long checkpoint_every = 10;  ///< theta snapshot cadence in the trace
};

enum class TrainStatus { Converged, MaxIters, Diverged };

struct TraceRow {
    long iter = 0;
    double j = 0.0;
    double grad_norm_biased = 0.0;
    double grad_norm_unbiased = 0.0;
    double tv_mismatch = 0.0;  ///< tv(d_pi, d_{pi,gamma})
};

struct Trace {
    std::vector<TraceRow> rows;  ///< one row per iteration plus a terminal row
    std::vector<std::pair<long, Policy>> checkpoints;
    TrainStatus status = TrainStatus::MaxIters;
    std::vector<std::string> warnings;
    double eta_final = 0.0;  ///< after any backtracking halvings
};

/// Gradient ascent with the biased (d_pi) or unbiased (k_theta-scaled
/// d_{pi,gamma}) expectation gradient. DirectProjected projects each state row
/// onto the simplex after the step and halves eta when J decreases.
/// Divergence (non-finite J or gradient) ends the run with a diagnostic trace.
std::pair<Policy, Trace> train(const Mdp& mdp, const Policy& policy0, const TrainConfig& cfg);

struct ValueIterationResult {
    Eigen::VectorXd v_star;
    double j_star = 0.0;
    long sweeps = 0;
};

/// Bellman-optimality fixed point to sup-norm tol (error bound via the
/// gamma/(1-gamma) contraction factor).
ValueIterationResult value_iteration(const Mdp& mdp, double tol);

/// Greedy deterministic Direct policy from a value function; ties break to the
/// lowest action index.
Policy greedy_policy(const Mdp& mdp, const Eigen::VectorXd& v);

/// Trace CSV: iter, J, grad_norm_biased, grad_norm_unbiased, tv_mismatch.
/// stride > 1 thins rows (terminal row always kept).
std::string trace_csv(const Trace& trace, long stride = 1);

}  // namespace pglab

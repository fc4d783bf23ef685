#include "pglab/optimizer.hpp"

#include "pglab/errors.hpp"
#include "pglab/evaluation.hpp"
#include "pglab/gradient.hpp"
#include "pglab/io.hpp"

#include <cmath>
#include <sstream>

namespace pglab {

namespace {

void check_variant(const Policy& policy, TrainVariant variant) {
    const bool ok = (variant == TrainVariant::DirectProjected &&
                     policy.kind() == PolicyKind::Direct) ||
                    (variant == TrainVariant::SoftmaxAscent &&
                     policy.kind() == PolicyKind::Softmax) ||
                    (variant == TrainVariant::CustomAscent && policy.kind() == PolicyKind::Custom);
    if (!ok) throw ValidationError("policy variant does not match the train config");
}

Policy step_policy(const Policy& policy, const Eigen::VectorXd& direction, double eta,
                   TrainVariant variant) {
    Eigen::VectorXd theta = policy.flat_params() + eta * direction;
    Policy moved = policy.with_flat_params(theta);
    if (variant != TrainVariant::DirectProjected) return moved;
    Eigen::MatrixXd table = moved.table();
    for (Eigen::Index s = 0; s < table.rows(); ++s)
        table.row(s) = project_simplex(table.row(s).transpose()).transpose();
    return Policy::direct(std::move(table));
}

}  // namespace

std::pair<Policy, Trace> train(const Mdp& mdp_in, const Policy& policy0, const TrainConfig& cfg) {
    check_variant(policy0, cfg.variant);
    if (!(cfg.eta > 0.0)) throw ValidationError("eta must be positive");
    if (cfg.max_iters < 1) throw ValidationError("max_iters must be at least 1");
    const Mdp mdp = cfg.gamma_override ? mdp_in.with_gamma(*cfg.gamma_override) : mdp_in;

    Trace trace;
    trace.status = TrainStatus::MaxIters;
    const double softmax_cap = (1.0 - mdp.gamma) * (1.0 - mdp.gamma) / 8.0;
    if (cfg.variant == TrainVariant::SoftmaxAscent && cfg.eta > softmax_cap + 1e-15)
        trace.warnings.push_back("eta " + format_double(cfg.eta) +
                                 " exceeds the softmax convergence cap (1-gamma)^2/8 = " +
                                 format_double(softmax_cap));

    Policy policy = policy0;
    double eta = cfg.eta;
    double prev_j = -std::numeric_limits<double>::infinity();
    Policy prev_policy = policy;
    int halvings = 0;
    long iter = 0;

    for (; iter < cfg.max_iters; ++iter) {
        const Eigen::MatrixXd probs = policy.action_probs();
        const ValueBundle vb = evaluate_probs(mdp, probs);

        // Backtracking for the projected variant: a J decrease reverts the
        // step and halves eta.
        if (cfg.variant == TrainVariant::DirectProjected && iter > 0 &&
            vb.j < prev_j - 1e-12 * std::max(1.0, std::abs(prev_j))) {
            trace.warnings.push_back("J decreased at iter " + std::to_string(iter) +
                                     "; halving eta to " + format_double(eta / 2.0));
            eta *= 0.5;
            policy = prev_policy;
            if (++halvings > 60) {
                trace.status = TrainStatus::Converged;
                break;
            }
            --iter;
            continue;
        }

        const StateDistribution d_gamma = discounted_distribution_probs(mdp, probs);
        const StateDistribution d_pi = undiscounted_distribution_probs(mdp, probs);
        const Eigen::VectorXd grad_biased =
            expectation_gradient_with_values(policy, vb.q, vb.adv, d_pi.values);
        const Eigen::VectorXd grad_unbiased =
            expectation_gradient_with_values(policy, vb.q, vb.adv, d_gamma.values);

        trace.rows.push_back({iter, vb.j, grad_biased.norm(), grad_unbiased.norm(),
                              tv_distance(d_pi, d_gamma)});
        if (cfg.checkpoint_every > 0 && iter % cfg.checkpoint_every == 0)
            trace.checkpoints.emplace_back(iter, policy);

        // Unbiased runs ascend the true gradient K_theta * grad^e.
        const Eigen::VectorXd used =
            cfg.use_biased ? grad_biased : Eigen::VectorXd(vb.kappa * grad_unbiased);

        if (!std::isfinite(vb.j) || !used.allFinite()) {
            trace.status = TrainStatus::Diverged;
            trace.warnings.push_back("non-finite J or gradient at iter " + std::to_string(iter));
            break;
        }
        if (used.norm() <= cfg.stop_grad_norm) {
            trace.status = TrainStatus::Converged;
            break;
        }

        prev_policy = policy;
        prev_j = vb.j;
        policy = step_policy(policy, used, eta, cfg.variant);

        if (cfg.variant == TrainVariant::DirectProjected) {
            const double moved =
                (policy.flat_params() - prev_policy.flat_params()).cwiseAbs().maxCoeff();
            if (moved <= 1e-13) {  // projected fixed point
                trace.status = TrainStatus::Converged;
                ++iter;
                break;
            }
        }
    }

    // Terminal row for the returned policy.
    const ValueBundle vb = evaluate(mdp, policy);
    const StateDistribution d_gamma = discounted_distribution(mdp, policy);
    const StateDistribution d_pi = undiscounted_distribution(mdp, policy);
    const Eigen::VectorXd gb = expectation_gradient_with_values(policy, vb.q, vb.adv, d_pi.values);
    const Eigen::VectorXd gu =
        expectation_gradient_with_values(policy, vb.q, vb.adv, d_gamma.values);
    if (trace.rows.empty() || trace.rows.back().iter < iter)
        trace.rows.push_back({iter, vb.j, gb.norm(), gu.norm(), tv_distance(d_pi, d_gamma)});
    if (cfg.checkpoint_every > 0 &&
        (trace.checkpoints.empty() || trace.checkpoints.back().first < iter))
        trace.checkpoints.emplace_back(iter, policy);
    trace.eta_final = eta;
    return {policy, trace};
}

ValueIterationResult value_iteration(const Mdp& mdp, double tol) {
    const int n = mdp.n_states;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd next(n);
    // Iterate-change threshold giving ||v - v*||_inf <= tol.
    const double threshold =
        mdp.gamma > 0.0 ? tol * (1.0 - mdp.gamma) / mdp.gamma : tol;
    ValueIterationResult res;
    for (res.sweeps = 0; res.sweeps < 1'000'000; ++res.sweeps) {
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < mdp.n_actions; ++a) {
                const double q = mdp.reward(s, a) + mdp.gamma * mdp.transition[a].row(s).dot(v);
                best = std::max(best, q);
            }
            next(s) = best;
        }
        const double delta = (next - v).cwiseAbs().maxCoeff();
        v = next;
        if (delta <= threshold) break;
    }
    res.v_star = v;
    res.j_star = mdp.d0.dot(v);
    return res;
}

Policy greedy_policy(const Mdp& mdp, const Eigen::VectorXd& v) {
    Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_actions);
    for (int s = 0; s < mdp.n_states; ++s) {
        int best_a = 0;
        double best_q = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double q = mdp.reward(s, a) + mdp.gamma * mdp.transition[a].row(s).dot(v);
            if (q > best_q) {  // ties keep the lowest action index
                best_q = q;
                best_a = a;
            }
        }
        probs(s, best_a) = 1.0;
    }
    return Policy::direct(std::move(probs));
}

std::string trace_csv(const Trace& trace, long stride) {
    std::ostringstream oss;
    oss << "iter,J,grad_norm_biased,grad_norm_unbiased,tv_mismatch\n";
    const long n = static_cast<long>(trace.rows.size());
    for (long i = 0; i < n; ++i) {
        if (stride > 1 && i % stride != 0 && i != n - 1) continue;
        const auto& r = trace.rows[i];
        oss << r.iter << ',' << format_double(r.j) << ',' << format_double(r.grad_norm_biased)
            << ',' << format_double(r.grad_norm_unbiased) << ',' << format_double(r.tv_mismatch)
            << '\n';
    }
    return oss.str();
}

}  // namespace pglab

#include "pglab/evaluation.hpp"

#include "pglab/errors.hpp"

#include <Eigen/LU>

#include <cassert>
#include <cmath>
#include <vector>

namespace pglab {

namespace {

// Strong connectivity of the support graph of P (edges where P > 0), via
// forward and backward reachability from state 0.
bool strongly_connected(const Eigen::MatrixXd& p) {
    const int n = static_cast<int>(p.rows());
    auto reach = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack = {0};
        seen[0] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                const double w = forward ? p(u, v) : p(v, u);
                if (w > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (int v = 0; v < n; ++v)
            if (!seen[v]) return false;
        return true;
    };
    return reach(true) && reach(false);
}

}  // namespace

ValueBundle evaluate_probs(const Mdp& mdp, const Eigen::MatrixXd& probs) {
    const int n = mdp.n_states;
    const Eigen::MatrixXd p_pi = induced_transition(mdp, probs);
    const Eigen::VectorXd r_pi = (probs.array() * mdp.reward.array()).rowwise().sum();

    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - mdp.gamma * p_pi;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);

    ValueBundle vb;
    vb.v = lu.solve(r_pi);
    assert(vb.v.allFinite() && "singular (I - gamma P)");
    vb.q.resize(n, mdp.n_actions);
    for (int a = 0; a < mdp.n_actions; ++a)
        vb.q.col(a) = mdp.reward.col(a) + mdp.gamma * (mdp.transition[a] * vb.v);
    vb.adv = vb.q.colwise() - vb.v;
    vb.j = mdp.d0.dot(vb.v);
    if (mdp.episodic()) {
        // mu^T = d0^T (I - gamma P)^[-1]; kappa = 1/(1-gamma) - mu(z).
        const Eigen::VectorXd mu = lu.transpose().solve(mdp.d0);
        vb.mu_z = mu(mdp.absorbing_index);
        vb.kappa = 1.0 / (1.0 - mdp.gamma) - vb.mu_z;
    } else {
        vb.mu_z = 0.0;
        vb.kappa = 1.0 / (1.0 - mdp.gamma);
    }
    return vb;
}

ValueBundle evaluate(const Mdp& mdp, const Policy& policy) {
    return evaluate_probs(mdp, policy.action_probs());
}

StateDistribution discounted_distribution_probs(const Mdp& mdp, const Eigen::MatrixXd& probs) {
    const Eigen::MatrixXd p_pi = induced_transition(mdp, probs);
    if (!mdp.episodic()) {
        const int n = mdp.n_states;
        const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - mdp.gamma * p_pi;
        Eigen::VectorXd d = (1.0 - mdp.gamma) *
                            Eigen::PartialPivLU<Eigen::MatrixXd>(system).transpose().solve(mdp.d0);
        return make_distribution(std::move(d), DistRole::DiscountedDgamma);
    }
    const int nt = mdp.n_states - 1;
    const Eigen::MatrixXd p_t = transient_restriction(mdp, p_pi);
    const Eigen::VectorXd d0_t = transient_restriction(mdp, mdp.d0);
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(nt, nt) - mdp.gamma * p_t;
    Eigen::VectorXd mu = Eigen::PartialPivLU<Eigen::MatrixXd>(system).transpose().solve(d0_t);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(mdp.n_states);
    const double norm = mu.sum();
    for (int i = 0, ii = 0; i < mdp.n_states; ++i)
        if (i != mdp.absorbing_index) full(i) = mu(ii++) / norm;
    return make_distribution(std::move(full), DistRole::DiscountedDgamma, mdp.absorbing_index);
}

StateDistribution discounted_distribution(const Mdp& mdp, const Policy& policy) {
    return discounted_distribution_probs(mdp, policy.action_probs());
}

StateDistribution undiscounted_distribution_probs(const Mdp& mdp, const Eigen::MatrixXd& probs) {
    const Eigen::MatrixXd p_pi = induced_transition(mdp, probs);
    if (!mdp.episodic()) {
        if (!strongly_connected(p_pi))
            throw AssumptionViolation(
                "P^pi is reducible: no unique stationary distribution (ergodicity assumption)");
        const int n = mdp.n_states;
        // Null-space solve: rows of (P^T - I) with the last equation replaced
        // by the sum-to-1 constraint.
        Eigen::MatrixXd system = p_pi.transpose() - Eigen::MatrixXd::Identity(n, n);
        system.row(n - 1).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        rhs(n - 1) = 1.0;
        Eigen::VectorXd d = Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(rhs);
        auto dist = make_distribution(std::move(d), DistRole::UndiscountedDpi);
        const double residual = (dist.values.transpose() * p_pi - dist.values.transpose())
                                    .cwiseAbs()
                                    .maxCoeff();
        if (residual > kPostArithmeticTol)
            throw AssumptionViolation("stationary solve residual " + std::to_string(residual));
        return dist;
    }
    const int nt = mdp.n_states - 1;
    const Eigen::MatrixXd p_t = transient_restriction(mdp, p_pi);
    const Eigen::VectorXd d0_t = transient_restriction(mdp, mdp.d0);
    const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(nt, nt) - p_t;
    Eigen::VectorXd counts = Eigen::PartialPivLU<Eigen::MatrixXd>(system).transpose().solve(d0_t);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(mdp.n_states);
    const double norm = counts.sum();
    for (int i = 0, ii = 0; i < mdp.n_states; ++i)
        if (i != mdp.absorbing_index) full(i) = counts(ii++) / norm;
    return make_distribution(std::move(full), DistRole::UndiscountedDpi, mdp.absorbing_index);
}

StateDistribution undiscounted_distribution(const Mdp& mdp, const Policy& policy) {
    return undiscounted_distribution_probs(mdp, policy.action_probs());
}

double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ValidationError("tv_distance: length mismatch");
    return 0.5 * (a - b).lpNorm<1>();
}

double tv_distance(const StateDistribution& a, const StateDistribution& b) {
    return tv_distance(a.values, b.values);
}

}  // namespace pglab

#include "pglab/gradient.hpp"

#include "pglab/errors.hpp"
#include "pglab/io.hpp"

#include <cmath>
#include <sstream>

namespace pglab {

Eigen::VectorXd expectation_gradient_with_values(const Policy& policy, const Eigen::MatrixXd& q,
                                                 const Eigen::MatrixXd& adv,
                                                 const Eigen::VectorXd& dist) {
    const int n_states = policy.n_states();
    const int n_actions = policy.n_actions();
    switch (policy.kind()) {
        case PolicyKind::Direct: {
            // Jacobian is the identity: component (s,a) is dist(s) Q(s,a).
            Eigen::VectorXd grad(n_states * n_actions);
            for (int s = 0; s < n_states; ++s)
                for (int a = 0; a < n_actions; ++a)
                    grad(s * n_actions + a) = dist(s) * q(s, a);
            return grad;
        }
        case PolicyKind::Softmax: {
            // Case-table contraction: dist(s) pi(a|s) A(s,a).
            const Eigen::MatrixXd probs = policy.action_probs();
            Eigen::VectorXd grad(n_states * n_actions);
            for (int s = 0; s < n_states; ++s)
                for (int a = 0; a < n_actions; ++a)
                    grad(s * n_actions + a) = dist(s) * probs(s, a) * adv(s, a);
            return grad;
        }
        case PolicyKind::Custom: {
            Eigen::VectorXd weights(n_states * n_actions);
            for (int s = 0; s < n_states; ++s)
                for (int a = 0; a < n_actions; ++a)
                    weights(s * n_actions + a) = dist(s) * q(s, a);
            return policy.jacobian().transpose() * weights;
        }
    }
    throw std::logic_error("unreachable");
}

Eigen::VectorXd expectation_gradient(const Mdp& mdp, const Policy& policy,
                                     const StateDistribution& dist) {
    if (dist.values.size() != mdp.n_states)
        throw ValidationError("distribution length does not match the MDP");
    if (policy.n_states() != mdp.n_states || policy.n_actions() != mdp.n_actions)
        throw ValidationError("policy dimensions do not match the MDP");
    if (mdp.episodic() && std::abs(dist.values(mdp.absorbing_index)) > kPostArithmeticTol)
        throw ValidationError("episodic expectation gradient needs dist(z) = 0");
    const ValueBundle vb = evaluate(mdp, policy);
    return expectation_gradient_with_values(policy, vb.q, vb.adv, dist.values);
}

Eigen::VectorXd finite_difference_grad(const Mdp& mdp, const Policy& policy, double h) {
    if (!(h > 0.0)) throw ValidationError("finite_difference_grad requires h > 0");
    if (policy.kind() == PolicyKind::Direct && policy.table().minCoeff() < h)
        throw ValidationError(
            "finite differences refuse Direct policies at the simplex boundary; "
            "use an interior policy");
    const Eigen::VectorXd theta = policy.flat_params();
    const int n_params = static_cast<int>(theta.size());
    Eigen::VectorXd grad(n_params);
    for (int k = 0; k < n_params; ++k) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp(k) += h;
        tm(k) -= h;
        const double jp = evaluate_probs(mdp, policy.with_flat_params(tp).action_probs()).j;
        const double jm = evaluate_probs(mdp, policy.with_flat_params(tm).action_probs()).j;
        grad(k) = (jp - jm) / (2.0 * h);
    }
    return grad;
}

GradientReport gradient_report(const Mdp& mdp, const Policy& policy, double fd_h) {
    GradientReport rep;
    const ValueBundle vb = evaluate(mdp, policy);
    const StateDistribution dg = discounted_distribution(mdp, policy);
    const StateDistribution dp = undiscounted_distribution(mdp, policy);
    rep.unbiased = expectation_gradient_with_values(policy, vb.q, vb.adv, dg.values);
    rep.biased = expectation_gradient_with_values(policy, vb.q, vb.adv, dp.values);
    rep.true_grad = finite_difference_grad(mdp, policy, fd_h);
    rep.k_theta = vb.kappa;
    rep.norm_unbiased = rep.unbiased.norm();
    rep.norm_biased = rep.biased.norm();
    rep.norm_true = rep.true_grad.norm();
    rep.inner_biased_unbiased = rep.unbiased.dot(rep.biased);
    const double denom = rep.norm_unbiased * rep.norm_biased;
    rep.cos_biased_unbiased = denom > 0.0 ? rep.inner_biased_unbiased / denom : 0.0;
    return rep;
}

std::string gradient_report_csv(const GradientReport& report) {
    std::ostringstream oss;
    oss << "coordinate,unbiased,biased,true\n";
    for (Eigen::Index k = 0; k < report.unbiased.size(); ++k)
        oss << k << ',' << format_double(report.unbiased(k)) << ','
            << format_double(report.biased(k)) << ',' << format_double(report.true_grad(k))
            << '\n';
    return oss.str();
}

}  // namespace pglab

#pragma once

#include "pglab/evaluation.hpp"
#include "pglab/mdp.hpp"
#include "pglab/policy.hpp"

#include <Eigen/Dense>

namespace pglab {

/// Exact gradients of one (mdp, policy) pair. true_grad ~= k_theta * unbiased;
/// k_theta lies in [1, 1/(1-gamma)].
struct GradientReport {
    Eigen::VectorXd unbiased;   ///< expectation gradient under d_{pi,gamma}
    Eigen::VectorXd biased;     ///< expectation gradient under d_pi
    Eigen::VectorXd true_grad;  ///< central finite differences of J(theta)
    double k_theta = 0.0;
    double cos_biased_unbiased = 0.0;
    double inner_biased_unbiased = 0.0;  ///< <unbiased, biased>, used by bounds
    double norm_unbiased = 0.0;
    double norm_biased = 0.0;
    double norm_true = 0.0;
};

/// sum_s dist(s) sum_a [d pi(a|s)/d theta] Q^pi(s,a), computed in the Jacobian
/// form (no log of zero). Plugging d_{pi,gamma} yields the unbiased expectation
/// gradient, plugging d_pi the biased one.
Eigen::VectorXd expectation_gradient(const Mdp& mdp, const Policy& policy,
                                     const StateDistribution& dist);

/// Same contraction with Q and A precomputed; hot path for the optimizer.
Eigen::VectorXd expectation_gradient_with_values(const Policy& policy, const Eigen::MatrixXd& q,
                                                 const Eigen::MatrixXd& adv,
                                                 const Eigen::VectorXd& dist);

/// Central differences of J(theta) per coordinate. Refuses Direct policies
/// whose entries sit within h of the simplex boundary (one-sided feasibility).
Eigen::VectorXd finite_difference_grad(const Mdp& mdp, const Policy& policy, double h = 1e-5);

/// Assembles unbiased, biased, and finite-difference gradients plus k_theta.
GradientReport gradient_report(const Mdp& mdp, const Policy& policy, double fd_h = 1e-5);

/// GradientReport CSV: coordinate, unbiased, biased, true.
std::string gradient_report_csv(const GradientReport& report);

}  // namespace pglab

#pragma once

#include "pglab/mdp.hpp"
#include "pglab/policy.hpp"

#include <Eigen/Dense>

namespace pglab {

/// Exact evaluation of one (mdp, policy) pair.
/// kappa is the scale linking the expectation gradient to the true gradient:
/// 1/(1-gamma) for continuing tasks, 1/(1-gamma) - mu_z for episodic ones,
/// where mu_z is the discounted visitation mass of the absorbing state.
struct ValueBundle {
    Eigen::VectorXd v;    ///< V^pi(s)
    Eigen::MatrixXd q;    ///< Q^pi(s,a)
    Eigen::MatrixXd adv;  ///< A^pi(s,a) = Q - V
    double j = 0.0;       ///< sum_s d0(s) V^pi(s)
    double kappa = 0.0;
    double mu_z = 0.0;  ///< episodic only, else 0
};

/// Dense solve of (I - gamma P^pi) V = r^pi; Q, A, J, kappa, mu_z follow.
ValueBundle evaluate(const Mdp& mdp, const Policy& policy);

/// Workhorse taking an explicit pi(a|s) table. Rows are not checked for
/// stochasticity: finite-difference probes evaluate slightly off-simplex
/// tables, where the linear-system extension of J is still well defined.
ValueBundle evaluate_probs(const Mdp& mdp, const Eigen::MatrixXd& probs);

/// Discounted state distribution d_{pi,gamma}.
/// Continuing: (1-gamma) d0^T (I - gamma P^pi)^{-1}.
/// Episodic: transient part d0~^T (I - gamma P~^pi)^{-1} normalized, 0 at z.
StateDistribution discounted_distribution(const Mdp& mdp, const Policy& policy);
StateDistribution discounted_distribution_probs(const Mdp& mdp, const Eigen::MatrixXd& probs);

/// Undiscounted state distribution d_pi.
/// Continuing: stationary distribution of P^pi via (P^pi^T - I) null-space
/// solve with sum-1 normalization; throws AssumptionViolation when the support
/// graph of P^pi is not strongly connected.
/// Episodic: normalized cumulative visitation d0~^T (I - P~^pi)^{-1}, 0 at z.
StateDistribution undiscounted_distribution(const Mdp& mdp, const Policy& policy);
StateDistribution undiscounted_distribution_probs(const Mdp& mdp, const Eigen::MatrixXd& probs);

/// Total variation distance: half the L1 distance, in [0, 1].
double tv_distance(const StateDistribution& a, const StateDistribution& b);
double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace pglab

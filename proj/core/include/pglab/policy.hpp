#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace pglab {

enum class PolicyKind { Direct, Softmax, Custom };

/// theta -> row-stochastic pi (n_states x n_actions).
using ProbFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
/// theta -> d pi / d theta, shape (n_states*n_actions) x n_params,
/// row index s*n_actions + a.
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Tabular policy parameterization. Value object: updates produce new
/// instances, safe to share across threads.
///
/// Direct stores action probabilities (simplex rows), Softmax stores a logit
/// table, Custom stores a low-dimensional parameter vector with explicit
/// probability and Jacobian maps (the Jacobian is verified against central
/// finite differences at construction).
class Policy {
public:
    static Policy direct(Eigen::MatrixXd probs);
    static Policy direct_uniform(int n_states, int n_actions);
    static Policy softmax(Eigen::MatrixXd logits);
    static Policy softmax_uniform(int n_states, int n_actions);
    static Policy custom(Eigen::VectorXd theta, int n_states, int n_actions, ProbFn prob_fn,
                         JacobianFn jacobian_fn, std::string tag = "custom");

    PolicyKind kind() const { return kind_; }
    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    int n_params() const;

    /// Row-stochastic pi(a|s); Softmax rows use max-subtraction.
    Eigen::MatrixXd action_probs() const;

    /// d pi(a|s) / d theta_k as a (n_states*n_actions) x n_params matrix.
    /// Softmax follows the per-state case table: pi_a - pi_a^2 on the
    /// diagonal, -pi_a pi_b off it, 0 across states. Direct is the identity.
    Eigen::MatrixXd jacobian() const;

    /// Parameters flattened row-major (s*n_actions + a) for tabular variants.
    Eigen::VectorXd flat_params() const;
    Policy with_flat_params(const Eigen::VectorXd& params) const;

    /// Tabular parameter table (Direct: probabilities, Softmax: logits).
    const Eigen::MatrixXd& table() const { return table_; }
    const Eigen::VectorXd& custom_params() const { return custom_theta_; }
    const std::string& tag() const { return tag_; }

private:
    Policy() = default;

    PolicyKind kind_ = PolicyKind::Direct;
    int n_states_ = 0;
    int n_actions_ = 0;
    Eigen::MatrixXd table_;
    Eigen::VectorXd custom_theta_;
    ProbFn prob_fn_;
    JacobianFn jac_fn_;
    std::string tag_;
};

/// Euclidean projection onto the probability simplex (sort-and-threshold).
/// Idempotent and non-expansive.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& row);

/// Single shared logit split between two action groups:
/// pi(a|s) = sigmoid(theta)/|favored| for a in favored,
/// (1-sigmoid(theta))/|other| otherwise, identical across states.
Policy shared_logit_policy(double theta, int n_states, int n_actions, std::vector<int> favored,
                           std::vector<int> other);

/// Policy checkpoint format: JSON {variant, theta, n_states, n_actions}.
/// Custom policies additionally carry custom_kind plus its parameters; only
/// custom_kind == "shared_logit" is reconstructible by the reader.
std::string policy_to_json(const Policy& policy);
Policy policy_from_json(const std::string& text);
void save_policy_json(const Policy& policy, const std::string& path);
Policy load_policy_json(const std::string& path);

}  // namespace pglab

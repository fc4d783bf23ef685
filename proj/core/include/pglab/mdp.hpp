#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace pglab {

class Policy;

/// Construction-time probability tolerance.
inline constexpr double kRowSumTol = 1e-12;
/// Tolerance for probability vectors produced by arithmetic.
inline constexpr double kPostArithmeticTol = 1e-10;

enum class MdpKind { Continuing, Episodic };

/// Finite MDP <S, A, R, p, gamma, d0>. Episodic instances carry exactly one
/// absorbing state z with p(z|z,a) = 1, R(z,a) = 0, d0(z) = 0.
/// Immutable after construction; all operations on it are pure.
struct Mdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<Eigen::MatrixXd> transition;  ///< transition[a](s, s') = p(s' | s, a)
    Eigen::MatrixXd reward;                   ///< reward(s, a)
    double gamma = 0.0;
    Eigen::VectorXd d0;
    MdpKind kind = MdpKind::Continuing;
    int absorbing_index = -1;  ///< valid iff Episodic
    double r_max = 0.0;        ///< max |R(s,a)|, fixed at construction

    bool episodic() const { return kind == MdpKind::Episodic; }

    /// Sets r_max, validates, throws ValidationError listing every violation.
    static Mdp make(int n_states, int n_actions, std::vector<Eigen::MatrixXd> transition,
                    Eigen::MatrixXd reward, double gamma, Eigen::VectorXd d0, MdpKind kind,
                    int absorbing_index = -1);

    /// Same model under a different discount factor.
    Mdp with_gamma(double g) const;
};

enum class DistRole { DiscountedDgamma, UndiscountedDpi, Empirical, Initial };

/// Probability vector over states. For episodic DiscountedDgamma /
/// UndiscountedDpi roles the entry at z is exactly 0.
struct StateDistribution {
    Eigen::VectorXd values;
    DistRole role = DistRole::Empirical;
};

/// Clamps round-off negatives (|x| < 1e-14) to 0, renormalizes, and checks the
/// distribution invariants. absorbing_index, when given, pins that entry to 0.
StateDistribution make_distribution(Eigen::VectorXd values, DistRole role,
                                    std::optional<int> absorbing_index = std::nullopt);

/// Every invariant violation with state/action indices, row-major scan order.
/// Total function: never throws, empty result means valid.
std::vector<std::string> validate(const Mdp& mdp);

/// P^pi(s'|s) = sum_a pi(a|s) p(s'|s,a).
Eigen::MatrixXd induced_transition(const Mdp& mdp, const Policy& policy);
Eigen::MatrixXd induced_transition(const Mdp& mdp, const Eigen::MatrixXd& action_probs);

/// Principal minor / subvector over the transient states (drops index z).
/// Throws ValidationError when called on a Continuing MDP.
Eigen::MatrixXd transient_restriction(const Mdp& mdp, const Eigen::MatrixXd& full);
Eigen::VectorXd transient_restriction(const Mdp& mdp, const Eigen::VectorXd& full);

/// MDP interchange format: one JSON document with n_states, n_actions, gamma,
/// kind, absorbing_index (nullable), d0, reward[s][a], transition[s][a][s'].
/// Writers emit full precision (17 significant digits).
std::string mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const std::string& text);
void save_mdp_json(const Mdp& mdp, const std::string& path);
Mdp load_mdp_json(const std::string& path);

}  // namespace pglab

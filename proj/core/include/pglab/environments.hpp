#pragma once

#include "pglab/mdp.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace pglab {

/// Two-location car rental fleet management (continuing).
struct CarRentalConfig {
    int capacity = 5;                   ///< cars per location
    int max_move = 3;                   ///< overnight transfer cap
    double excess_move_penalty = 30.0;  ///< per car requested beyond availability
    double rental_reward = 10.0;
    double move_cost = 2.0;
    double request_rate_1 = 3.0;  ///< Poisson means
    double request_rate_2 = 4.0;
    double return_rate_1 = 3.0;
    double return_rate_2 = 2.0;
    int poisson_truncation = 24;  ///< residual tail mass folds into this point
};

/// Windy gridworld (episodic). Cell indices are row-major (row*width + col);
/// the wind adds probability epsilon each of drifting right and down.
struct GridworldConfig {
    int width = 4;
    int height = 4;
    double wind_epsilon = 0.1;
    double step_reward = -1.0;
    std::set<int> terminal_cells = {0, 15};
};

/// States are (cars_1, cars_2) pairs, index c1*(capacity+1)+c2; actions are
/// net cars moved in {-max_move..max_move}, index shifted by max_move.
/// Transitions and expected rewards come from exact truncated-Poisson
/// enumeration of (requests, returns) at both locations; over-moves are
/// clipped to available cars with the per-car excess penalty.
/// d0 defaults to uniform over all states.
Mdp build_car_rental(const CarRentalConfig& cfg, double gamma,
                     std::optional<StateDistribution> d0 = std::nullopt);

/// Actions up=0, down=1, left=2, right=3. Per (s,a): probability 1-2eps for
/// the intended move, eps forced right, eps forced down; off-grid moves stay
/// in place. All terminal cells merge into one absorbing state z (last index)
/// with zero reward; every other transition pays step_reward.
/// d0 defaults to uniform over the transient cells.
Mdp build_gridworld(const GridworldConfig& cfg, double gamma,
                    std::optional<StateDistribution> d0 = std::nullopt);

/// Transient cell indices in increasing order; state i of the built MDP is
/// cell order[i], and z = order.size().
std::vector<int> gridworld_transient_cells(const GridworldConfig& cfg);

inline constexpr int kGridActionUp = 0;
inline constexpr int kGridActionDown = 1;
inline constexpr int kGridActionLeft = 2;
inline constexpr int kGridActionRight = 3;

/// Random MDP with normalized positive-uniform rows and rewards in [-1, 1],
/// deterministic under seed. Episodic instances mix probability 0.05 of
/// reaching z from every (s,a), so the absorbing-probability assumption holds
/// with m = 1, alpha <= 0.95.
Mdp random_mdp(int n_states, int n_actions, MdpKind kind, double gamma, std::uint64_t seed);

}  // namespace pglab

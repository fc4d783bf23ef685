#pragma once

#include "pglab/mdp.hpp"
#include "pglab/policy.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pglab {

struct BufferTransition {
    long t = 0;  ///< step index within the episode
    int s = 0;
    int a = 0;
    double r = 0.0;
    int s_next = 0;
    long episode_id = 0;
};

/// Trajectory buffer, filled to exactly its capacity (mid-episode truncation).
struct Buffer {
    long capacity = 0;
    std::vector<BufferTransition> transitions;
    std::uint64_t seed = 0;
    static constexpr const char* kRngName = "splitmix64";
};

/// Hard cap on a single episode before signalling an assumption violation.
inline constexpr long kEpisodeStepCap = 1'000'000;
/// Continuing tasks restart from d0 every this many steps (horizon cap); the
/// stationary limit of the state frequencies is unaffected.
inline constexpr long kContinuingHorizonCap = 1'000;

/// Repeats episodes from S0 ~ d0 under pi, appending (s, a, r, s') tuples
/// until the buffer holds `capacity` transitions. Episodic episodes break when
/// S_{t+1} is absorbing (the absorbing-entry tuple is stored). Deterministic
/// under seed.
Buffer fill_buffer(const Mdp& mdp, const Policy& policy, long capacity, std::uint64_t seed);

/// Normalized counts of source states S_t. With an absorbing index given, that
/// state's count is 0 by construction (transitions never start at z).
StateDistribution empirical_state_distribution(const Buffer& buffer, int n_states,
                                               std::optional<int> episodic_z = std::nullopt);

struct ConvergencePoint {
    long capacity = 0;
    double tv_to_dpi = 0.0;
    double tv_to_dgamma = 0.0;
};

/// TV(empirical, d_pi) and TV(empirical, d_{pi,gamma}) at each capacity.
/// Prefixes of one seeded stream, so point k equals an independent fill at
/// capacities[k] with the same seed.
std::vector<ConvergencePoint> convergence_curve(const Mdp& mdp, const Policy& policy,
                                                const std::vector<long>& capacities,
                                                std::uint64_t seed);

/// Buffer dump CSV: t, s, a, r, s_next, episode_id.
std::string buffer_csv(const Buffer& buffer);

}  // namespace pglab

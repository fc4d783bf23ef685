#include "pglab/buffer.hpp"

#include "pglab/errors.hpp"
#include "pglab/evaluation.hpp"
#include "pglab/io.hpp"
#include "pglab/rng.hpp"

#include <sstream>

namespace pglab {

Buffer fill_buffer(const Mdp& mdp, const Policy& policy, long capacity, std::uint64_t seed) {
    if (capacity < 0) throw ValidationError("buffer capacity must be nonnegative");
    Buffer buffer;
    buffer.capacity = capacity;
    buffer.seed = seed;
    buffer.transitions.reserve(static_cast<std::size_t>(capacity));
    if (capacity == 0) return buffer;

    SplitMix64 rng(seed);
    const Eigen::MatrixXd probs = policy.action_probs();
    long episode_id = 0;
    while (static_cast<long>(buffer.transitions.size()) < capacity) {
        int s = rng.next_index(mdp.d0);
        for (long t = 0;; ++t) {
            if (t >= kEpisodeStepCap)
                throw AssumptionViolation(
                    "episode exceeded 1e6 steps; absorbing-probability assumption violated");
            const int a = rng.next_index(probs.row(s).transpose());
            const int s_next = rng.next_index(mdp.transition[a].row(s).transpose());
            buffer.transitions.push_back({t, s, a, mdp.reward(s, a), s_next, episode_id});
            if (static_cast<long>(buffer.transitions.size()) >= capacity) break;
            if (mdp.episodic() && s_next == mdp.absorbing_index) break;
            // Continuing tasks restart from d0 at the horizon cap; the
            // stationary frequency limit is unchanged.
            if (!mdp.episodic() && t + 1 >= kContinuingHorizonCap) break;
            s = s_next;
        }
        ++episode_id;
    }
    return buffer;
}

StateDistribution empirical_state_distribution(const Buffer& buffer, int n_states,
                                               std::optional<int> episodic_z) {
    if (buffer.transitions.empty())
        throw ValidationError("empirical distribution of an empty buffer");
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_states);
    for (const auto& tr : buffer.transitions) counts(tr.s) += 1.0;
    if (episodic_z && counts(*episodic_z) != 0.0)
        throw ValidationError("buffer stores a transition leaving the absorbing state");
    counts /= static_cast<double>(buffer.transitions.size());
    return StateDistribution{std::move(counts), DistRole::Empirical};
}

std::vector<ConvergencePoint> convergence_curve(const Mdp& mdp, const Policy& policy,
                                                const std::vector<long>& capacities,
                                                std::uint64_t seed) {
    for (std::size_t i = 1; i < capacities.size(); ++i)
        if (capacities[i] <= capacities[i - 1])
            throw ValidationError("capacities must be strictly increasing");
    if (capacities.empty()) return {};

    const StateDistribution d_pi = undiscounted_distribution(mdp, policy);
    const StateDistribution d_gamma = discounted_distribution(mdp, policy);
    // One stream; prefix counts at each capacity equal an independent fill at
    // that capacity with the same seed.
    const Buffer full = fill_buffer(mdp, policy, capacities.back(), seed);

    std::vector<ConvergencePoint> out;
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(mdp.n_states);
    std::size_t next = 0;
    for (std::size_t i = 0; i < full.transitions.size(); ++i) {
        counts(full.transitions[i].s) += 1.0;
        if (next < capacities.size() &&
            static_cast<long>(i + 1) == capacities[next]) {
            const Eigen::VectorXd freq = counts / static_cast<double>(i + 1);
            out.push_back({capacities[next], tv_distance(freq, d_pi.values),
                           tv_distance(freq, d_gamma.values)});
            ++next;
        }
    }
    return out;
}

std::string buffer_csv(const Buffer& buffer) {
    std::ostringstream oss;
    oss << "t,s,a,r,s_next,episode_id\n";
    for (const auto& tr : buffer.transitions)
        oss << tr.t << ',' << tr.s << ',' << tr.a << ',' << format_double(tr.r) << ','
            << tr.s_next << ',' << tr.episode_id << '\n';
    return oss.str();
}

}  // namespace pglab

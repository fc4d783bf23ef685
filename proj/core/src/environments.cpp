#include "pglab/environments.hpp"

#include "pglab/errors.hpp"
#include "pglab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pglab {

namespace {

// Truncated Poisson pmf with the residual tail mass folded into the
// truncation point, so the pmf sums to exactly 1.
std::vector<double> truncated_poisson(double mean, int truncation) {
    std::vector<double> pmf(truncation + 1, 0.0);
    double p = std::exp(-mean);
    double cum = 0.0;
    for (int k = 0; k < truncation; ++k) {
        pmf[k] = p;
        cum += p;
        p *= mean / (k + 1);
    }
    pmf[truncation] = 1.0 - cum;
    return pmf;
}

double poisson_tail(double mean, int truncation) {
    double p = std::exp(-mean);
    double cum = 0.0;
    for (int k = 0; k <= truncation; ++k) {
        cum += p;
        p *= mean / (k + 1);
    }
    return 1.0 - cum;
}

// One location's day: starting from `cars` available, enumerate (requests,
// returns); rentals clip to availability, end-of-day count clips to capacity
// (extra returns leave the fleet). Returns the distribution over end-of-day
// counts and the expected number of cars rented.
struct DayOutcome {
    Eigen::VectorXd end_dist;
    double expected_rentals = 0.0;
};

DayOutcome location_day(int cars, double request_rate, double return_rate, int capacity,
                        int truncation) {
    const auto req_pmf = truncated_poisson(request_rate, truncation);
    const auto ret_pmf = truncated_poisson(return_rate, truncation);
    DayOutcome out;
    out.end_dist = Eigen::VectorXd::Zero(capacity + 1);
    for (int req = 0; req <= truncation; ++req) {
        const int rented = std::min(req, cars);
        for (int ret = 0; ret <= truncation; ++ret) {
            const double p = req_pmf[req] * ret_pmf[ret];
            const int end = std::min(cars - rented + ret, capacity);
            out.end_dist(end) += p;
            out.expected_rentals += p * rented;
        }
    }
    return out;
}

void validate_car_rental(const CarRentalConfig& cfg) {
    if (cfg.capacity < 1) throw ValidationError("car rental: capacity must be >= 1");
    if (cfg.max_move < 0) throw ValidationError("car rental: max_move must be >= 0");
    if (cfg.poisson_truncation < 1)
        throw ValidationError("car rental: poisson_truncation must be >= 1");
    for (double mean : {cfg.request_rate_1, cfg.request_rate_2, cfg.return_rate_1,
                        cfg.return_rate_2}) {
        if (mean < 0.0) throw ValidationError("car rental: Poisson means must be nonnegative");
        if (poisson_tail(mean, cfg.poisson_truncation) >= 1e-8)
            throw ValidationError(
                "car rental: poisson_truncation leaves tail mass >= 1e-8 for mean " +
                std::to_string(mean));
    }
}

void validate_gridworld(const GridworldConfig& cfg) {
    if (cfg.width < 1 || cfg.height < 1) throw ValidationError("gridworld: empty grid");
    if (!(cfg.wind_epsilon >= 0.0 && 2.0 * cfg.wind_epsilon <= 1.0))
        throw ValidationError("gridworld: need 0 <= 2*epsilon <= 1");
    if (cfg.terminal_cells.empty()) throw ValidationError("gridworld: no terminal cells");
    const int n_cells = cfg.width * cfg.height;
    for (int cell : cfg.terminal_cells)
        if (cell < 0 || cell >= n_cells)
            throw ValidationError("gridworld: terminal cell out of range: " +
                                  std::to_string(cell));
    if (static_cast<int>(cfg.terminal_cells.size()) >= n_cells)
        throw ValidationError("gridworld: no transient cells left");
}

}  // namespace

Mdp build_car_rental(const CarRentalConfig& cfg, double gamma,
                     std::optional<StateDistribution> d0) {
    validate_car_rental(cfg);
    const int side = cfg.capacity + 1;
    const int n_states = side * side;
    const int n_actions = 2 * cfg.max_move + 1;

    // Day outcomes depend only on the post-move car count at each location.
    std::vector<DayOutcome> day1(side), day2(side);
    for (int c = 0; c < side; ++c) {
        day1[c] = location_day(c, cfg.request_rate_1, cfg.return_rate_1, cfg.capacity,
                               cfg.poisson_truncation);
        day2[c] = location_day(c, cfg.request_rate_2, cfg.return_rate_2, cfg.capacity,
                               cfg.poisson_truncation);
    }

    std::vector<Eigen::MatrixXd> transition(n_actions,
                                            Eigen::MatrixXd::Zero(n_states, n_states));
    Eigen::MatrixXd reward = Eigen::MatrixXd::Zero(n_states, n_actions);

    for (int c1 = 0; c1 < side; ++c1) {
        for (int c2 = 0; c2 < side; ++c2) {
            const int s = c1 * side + c2;
            for (int j = 0; j < n_actions; ++j) {
                const int net = j - cfg.max_move;  // >0 moves loc1 -> loc2
                const int avail = net > 0 ? c1 : c2;
                const int moved = std::min(std::abs(net), avail);
                const int excess = std::abs(net) - moved;
                const int m1 = net > 0 ? c1 - moved : std::min(c1 + moved, cfg.capacity);
                const int m2 = net > 0 ? std::min(c2 + moved, cfg.capacity) : c2 - moved;

                const DayOutcome& o1 = day1[m1];
                const DayOutcome& o2 = day2[m2];
                reward(s, j) = -cfg.move_cost * moved - cfg.excess_move_penalty * excess +
                               cfg.rental_reward * (o1.expected_rentals + o2.expected_rentals);
                for (int e1 = 0; e1 < side; ++e1) {
                    if (o1.end_dist(e1) == 0.0) continue;
                    for (int e2 = 0; e2 < side; ++e2)
                        transition[j](s, e1 * side + e2) += o1.end_dist(e1) * o2.end_dist(e2);
                }
            }
        }
    }

    Eigen::VectorXd init = d0 ? d0->values
                              : Eigen::VectorXd::Constant(n_states, 1.0 / n_states);
    return Mdp::make(n_states, n_actions, std::move(transition), std::move(reward), gamma,
                     std::move(init), MdpKind::Continuing);
}

std::vector<int> gridworld_transient_cells(const GridworldConfig& cfg) {
    std::vector<int> cells;
    for (int cell = 0; cell < cfg.width * cfg.height; ++cell)
        if (!cfg.terminal_cells.count(cell)) cells.push_back(cell);
    return cells;
}

Mdp build_gridworld(const GridworldConfig& cfg, double gamma,
                    std::optional<StateDistribution> d0) {
    validate_gridworld(cfg);
    const auto cells = gridworld_transient_cells(cfg);
    const int n_transient = static_cast<int>(cells.size());
    const int n_states = n_transient + 1;  // terminals merge into one z
    const int z = n_transient;
    const int n_actions = 4;

    std::vector<int> cell_to_state(cfg.width * cfg.height, z);
    for (int i = 0; i < n_transient; ++i) cell_to_state[cells[i]] = i;

    auto move = [&cfg](int cell, int action) {
        const int row = cell / cfg.width;
        const int col = cell % cfg.width;
        int r = row, c = col;
        switch (action) {
            case kGridActionUp: r = row - 1; break;
            case kGridActionDown: r = row + 1; break;
            case kGridActionLeft: c = col - 1; break;
            case kGridActionRight: c = col + 1; break;
        }
        if (r < 0 || r >= cfg.height || c < 0 || c >= cfg.width) return cell;  // stay in place
        return r * cfg.width + c;
    };

    std::vector<Eigen::MatrixXd> transition(n_actions,
                                            Eigen::MatrixXd::Zero(n_states, n_states));
    Eigen::MatrixXd reward = Eigen::MatrixXd::Zero(n_states, n_actions);
    const double eps = cfg.wind_epsilon;

    for (int i = 0; i < n_transient; ++i) {
        const int cell = cells[i];
        for (int a = 0; a < n_actions; ++a) {
            transition[a](i, cell_to_state[move(cell, a)]) += 1.0 - 2.0 * eps;
            transition[a](i, cell_to_state[move(cell, kGridActionRight)]) += eps;
            transition[a](i, cell_to_state[move(cell, kGridActionDown)]) += eps;
            reward(i, a) = cfg.step_reward;
        }
    }
    for (int a = 0; a < n_actions; ++a) transition[a](z, z) = 1.0;

    Eigen::VectorXd init;
    if (d0) {
        init = d0->values;
    } else {
        init = Eigen::VectorXd::Constant(n_states, 1.0 / n_transient);
        init(z) = 0.0;
    }
    return Mdp::make(n_states, n_actions, std::move(transition), std::move(reward), gamma,
                     std::move(init), MdpKind::Episodic, z);
}

Mdp random_mdp(int n_states, int n_actions, MdpKind kind, double gamma, std::uint64_t seed) {
    if (n_states < 2) throw ValidationError("random_mdp needs n_states >= 2");
    SplitMix64 rng(seed);
    const bool episodic = kind == MdpKind::Episodic;
    const int z = episodic ? n_states - 1 : -1;

    std::vector<Eigen::MatrixXd> transition(n_actions,
                                            Eigen::MatrixXd::Zero(n_states, n_states));
    Eigen::MatrixXd reward(n_states, n_actions);
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            Eigen::VectorXd row(n_states);
            for (int sp = 0; sp < n_states; ++sp) row(sp) = rng.next_positive();
            row /= row.sum();
            if (episodic) {
                if (s == z) {
                    row.setZero();
                    row(z) = 1.0;
                } else {
                    // Guarantee absorption: m = 1, alpha <= 0.95.
                    row *= 0.95;
                    row(z) += 0.05;
                }
            }
            transition[a].row(s) = row.transpose();
            reward(s, a) = (episodic && s == z) ? 0.0 : 2.0 * rng.next_double() - 1.0;
        }
    }

    Eigen::VectorXd d0(n_states);
    for (int s = 0; s < n_states; ++s) d0(s) = rng.next_positive();
    if (episodic) d0(z) = 0.0;
    d0 /= d0.sum();
    return Mdp::make(n_states, n_actions, std::move(transition), std::move(reward), gamma,
                     std::move(d0), kind, z);
}

}  // namespace pglab

#include "pglab/mdp.hpp"

#include "pglab/errors.hpp"
#include "pglab/io.hpp"
#include "pglab/policy.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace pglab {

namespace {

bool finite_all(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

Mdp Mdp::make(int n_states, int n_actions, std::vector<Eigen::MatrixXd> transition,
              Eigen::MatrixXd reward, double gamma, Eigen::VectorXd d0, MdpKind kind,
              int absorbing_index) {
    Mdp mdp;
    mdp.n_states = n_states;
    mdp.n_actions = n_actions;
    mdp.transition = std::move(transition);
    mdp.reward = std::move(reward);
    mdp.gamma = gamma;
    mdp.d0 = std::move(d0);
    mdp.kind = kind;
    mdp.absorbing_index = kind == MdpKind::Episodic ? absorbing_index : -1;
    mdp.r_max = mdp.reward.size() > 0 ? mdp.reward.cwiseAbs().maxCoeff() : 0.0;

    auto violations = validate(mdp);
    if (!violations.empty()) {
        std::ostringstream oss;
        oss << "invalid MDP (" << violations.size() << " violations):";
        for (const auto& v : violations) oss << "\n  - " << v;
        throw ValidationError(oss.str());
    }
    return mdp;
}

Mdp Mdp::with_gamma(double g) const {
    Mdp copy = *this;
    copy.gamma = g;
    return copy;
}

std::vector<std::string> validate(const Mdp& mdp) {
    std::vector<std::string> out;
    auto add = [&out](const std::string& msg) { out.push_back(msg); };

    if (mdp.n_states <= 0) add("n_states must be positive");
    if (mdp.n_actions <= 0) add("n_actions must be positive");
    if (!(mdp.gamma >= 0.0 && mdp.gamma < 1.0)) add("gamma must lie in [0,1)");
    if (static_cast<int>(mdp.transition.size()) != mdp.n_actions)
        add("transition must hold one matrix per action");
    if (mdp.reward.rows() != mdp.n_states || mdp.reward.cols() != mdp.n_actions)
        add("reward must be n_states x n_actions");
    if (mdp.d0.size() != mdp.n_states) add("d0 must have n_states entries");
    const bool episodic = mdp.kind == MdpKind::Episodic;
    const int z = mdp.absorbing_index;
    if (episodic && (z < 0 || z >= mdp.n_states))
        add("episodic MDP needs a valid absorbing_index");
    if (!out.empty()) return out;  // shape errors make the scans meaningless

    for (int a = 0; a < mdp.n_actions; ++a) {
        const auto& p = mdp.transition[a];
        if (p.rows() != mdp.n_states || p.cols() != mdp.n_states) {
            add("transition[" + std::to_string(a) + "] must be n_states x n_states");
            return out;
        }
        if (!finite_all(p)) add("transition[" + std::to_string(a) + "] has non-finite entries");
    }

    // Row-major scan over (s, a): row sums and negativity.
    for (int s = 0; s < mdp.n_states; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            const auto row = mdp.transition[a].row(s);
            if (row.minCoeff() < 0.0)
                add("negative transition probability at (s=" + std::to_string(s) +
                    ",a=" + std::to_string(a) + ")");
            const double sum = row.sum();
            if (std::abs(sum - 1.0) > kRowSumTol)
                add("row-sum violation at (s=" + std::to_string(s) + ",a=" + std::to_string(a) +
                    "): sum=" + format_double(sum));
        }
    }

    for (int s = 0; s < mdp.n_states; ++s)
        for (int a = 0; a < mdp.n_actions; ++a)
            if (std::abs(mdp.reward(s, a)) > mdp.r_max + 1e-15 || !std::isfinite(mdp.reward(s, a)))
                add("reward out of [-R_max, R_max] at (s=" + std::to_string(s) +
                    ",a=" + std::to_string(a) + ")");

    if (mdp.d0.minCoeff() < 0.0) add("d0 has negative entries");
    if (std::abs(mdp.d0.sum() - 1.0) > kRowSumTol)
        add("d0 must sum to 1: sum=" + format_double(mdp.d0.sum()));

    if (episodic) {
        if (mdp.d0(z) != 0.0) add("d0 must be exactly 0 at the absorbing state");
        for (int s = 0; s < mdp.n_states; ++s)
            if (s != z && mdp.d0(s) <= 0.0)
                add("d0 must be positive at transient state s=" + std::to_string(s));
        for (int a = 0; a < mdp.n_actions; ++a) {
            if (std::abs(mdp.transition[a](z, z) - 1.0) > kRowSumTol)
                add("absorbing state must self-loop: p(z|z,a=" + std::to_string(a) + ") != 1");
            if (mdp.reward(z, a) != 0.0)
                add("absorbing state must have zero reward at a=" + std::to_string(a));
        }
    }
    return out;
}

StateDistribution make_distribution(Eigen::VectorXd values, DistRole role,
                                    std::optional<int> absorbing_index) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) < 0.0) {
            if (values(i) < -1e-14)
                throw ValidationError("distribution entry " + std::to_string(i) +
                                      " is negative beyond round-off: " +
                                      format_double(values(i)));
            values(i) = 0.0;
        }
    }
    const double sum = values.sum();
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw ValidationError("distribution does not sum to a positive finite value");
    if (std::abs(sum - 1.0) > kPostArithmeticTol)
        throw ValidationError("distribution sum " + format_double(sum) + " off by more than 1e-10");
    values /= sum;
    if (absorbing_index &&
        (role == DistRole::DiscountedDgamma || role == DistRole::UndiscountedDpi)) {
        if (values(*absorbing_index) != 0.0)
            throw ValidationError("episodic distribution must be exactly 0 at z");
    }
    return StateDistribution{std::move(values), role};
}

Eigen::MatrixXd induced_transition(const Mdp& mdp, const Eigen::MatrixXd& action_probs) {
    if (action_probs.rows() != mdp.n_states || action_probs.cols() != mdp.n_actions)
        throw ValidationError("policy dimensions do not match the MDP");
    Eigen::MatrixXd p_pi = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
    for (int a = 0; a < mdp.n_actions; ++a)
        p_pi.noalias() += action_probs.col(a).asDiagonal() * mdp.transition[a];
    return p_pi;
}

Eigen::MatrixXd induced_transition(const Mdp& mdp, const Policy& policy) {
    return induced_transition(mdp, policy.action_probs());
}

Eigen::MatrixXd transient_restriction(const Mdp& mdp, const Eigen::MatrixXd& full) {
    if (!mdp.episodic())
        throw ValidationError("transient_restriction requires an episodic MDP");
    const int z = mdp.absorbing_index;
    const int n = mdp.n_states - 1;
    Eigen::MatrixXd out(n, n);
    for (int i = 0, ii = 0; i < mdp.n_states; ++i) {
        if (i == z) continue;
        for (int j = 0, jj = 0; j < mdp.n_states; ++j) {
            if (j == z) continue;
            out(ii, jj++) = full(i, j);
        }
        ++ii;
    }
    return out;
}

Eigen::VectorXd transient_restriction(const Mdp& mdp, const Eigen::VectorXd& full) {
    if (!mdp.episodic())
        throw ValidationError("transient_restriction requires an episodic MDP");
    const int z = mdp.absorbing_index;
    Eigen::VectorXd out(mdp.n_states - 1);
    for (int i = 0, ii = 0; i < mdp.n_states; ++i)
        if (i != z) out(ii++) = full(i);
    return out;
}

std::string mdp_to_json(const Mdp& mdp) {
    // Hand-rolled writer: fixes the field order and the 17-significant-digit
    // number format the interchange contract asks for.
    std::ostringstream oss;
    oss << "{\n";
    oss << "  \"n_states\": " << mdp.n_states << ",\n";
    oss << "  \"n_actions\": " << mdp.n_actions << ",\n";
    oss << "  \"gamma\": " << format_double(mdp.gamma) << ",\n";
    oss << "  \"kind\": \"" << (mdp.episodic() ? "episodic" : "continuing") << "\",\n";
    if (mdp.episodic())
        oss << "  \"absorbing_index\": " << mdp.absorbing_index << ",\n";
    else
        oss << "  \"absorbing_index\": null,\n";
    oss << "  \"d0\": [";
    for (int s = 0; s < mdp.n_states; ++s)
        oss << (s ? ", " : "") << format_double(mdp.d0(s));
    oss << "],\n";
    oss << "  \"reward\": [\n";
    for (int s = 0; s < mdp.n_states; ++s) {
        oss << "    [";
        for (int a = 0; a < mdp.n_actions; ++a)
            oss << (a ? ", " : "") << format_double(mdp.reward(s, a));
        oss << (s + 1 < mdp.n_states ? "],\n" : "]\n");
    }
    oss << "  ],\n";
    oss << "  \"transition\": [\n";
    for (int s = 0; s < mdp.n_states; ++s) {
        oss << "    [";
        for (int a = 0; a < mdp.n_actions; ++a) {
            oss << (a ? ", [" : "[");
            for (int sp = 0; sp < mdp.n_states; ++sp)
                oss << (sp ? ", " : "") << format_double(mdp.transition[a](s, sp));
            oss << "]";
        }
        oss << (s + 1 < mdp.n_states ? "],\n" : "]\n");
    }
    oss << "  ]\n}\n";
    return oss.str();
}

Mdp mdp_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("/: not valid JSON: ") + e.what());
    }
    auto require = [&doc](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) throw ValidationError(std::string("/") + key + ": missing field");
        return doc.at(key);
    };

    const int n_states = require("n_states").get<int>();
    const int n_actions = require("n_actions").get<int>();
    const double gamma = require("gamma").get<double>();
    const std::string kind_str = require("kind").get<std::string>();
    MdpKind kind;
    if (kind_str == "episodic")
        kind = MdpKind::Episodic;
    else if (kind_str == "continuing")
        kind = MdpKind::Continuing;
    else
        throw ValidationError("/kind: expected \"episodic\" or \"continuing\"");
    int absorbing = -1;
    if (doc.contains("absorbing_index") && !doc["absorbing_index"].is_null())
        absorbing = doc["absorbing_index"].get<int>();

    const auto& jd0 = require("d0");
    if (!jd0.is_array() || static_cast<int>(jd0.size()) != n_states)
        throw ValidationError("/d0: expected array of n_states numbers");
    Eigen::VectorXd d0(n_states);
    for (int s = 0; s < n_states; ++s) d0(s) = jd0[s].get<double>();

    const auto& jr = require("reward");
    if (!jr.is_array() || static_cast<int>(jr.size()) != n_states)
        throw ValidationError("/reward: expected n_states rows");
    Eigen::MatrixXd reward(n_states, n_actions);
    for (int s = 0; s < n_states; ++s) {
        if (static_cast<int>(jr[s].size()) != n_actions)
            throw ValidationError("/reward/" + std::to_string(s) + ": expected n_actions entries");
        for (int a = 0; a < n_actions; ++a) reward(s, a) = jr[s][a].get<double>();
    }

    const auto& jt = require("transition");
    if (!jt.is_array() || static_cast<int>(jt.size()) != n_states)
        throw ValidationError("/transition: expected n_states rows");
    std::vector<Eigen::MatrixXd> transition(n_actions,
                                            Eigen::MatrixXd::Zero(n_states, n_states));
    for (int s = 0; s < n_states; ++s) {
        if (static_cast<int>(jt[s].size()) != n_actions)
            throw ValidationError("/transition/" + std::to_string(s) +
                                  ": expected n_actions rows");
        for (int a = 0; a < n_actions; ++a) {
            if (static_cast<int>(jt[s][a].size()) != n_states)
                throw ValidationError("/transition/" + std::to_string(s) + "/" +
                                      std::to_string(a) + ": expected n_states entries");
            for (int sp = 0; sp < n_states; ++sp)
                transition[a](s, sp) = jt[s][a][sp].get<double>();
        }
    }
    return Mdp::make(n_states, n_actions, std::move(transition), std::move(reward), gamma,
                     std::move(d0), kind, absorbing);
}

void save_mdp_json(const Mdp& mdp, const std::string& path) {
    write_text_file(path, mdp_to_json(mdp));
}

Mdp load_mdp_json(const std::string& path) { return mdp_from_json(read_text_file(path)); }

}  // namespace pglab

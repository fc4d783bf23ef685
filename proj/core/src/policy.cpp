#include "pglab/policy.hpp"

#include "pglab/errors.hpp"
#include "pglab/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pglab {

namespace {

void check_rows_stochastic(const Eigen::MatrixXd& probs, double tol, const char* what) {
    for (Eigen::Index s = 0; s < probs.rows(); ++s) {
        if (probs.row(s).minCoeff() < -1e-15)
            throw ValidationError(std::string(what) + ": negative probability in row " +
                                  std::to_string(s));
        if (std::abs(probs.row(s).sum() - 1.0) > tol)
            throw ValidationError(std::string(what) + ": row " + std::to_string(s) +
                                  " sums to " + format_double(probs.row(s).sum()));
    }
}

// Central-difference check of a Custom jacobian over every parameter.
void verify_custom_jacobian(const Eigen::VectorXd& theta, int n_states, int n_actions,
                            const ProbFn& prob_fn, const JacobianFn& jac_fn) {
    const double h = 1e-6;
    const Eigen::MatrixXd jac = jac_fn(theta);
    const int n_params = static_cast<int>(theta.size());
    if (jac.rows() != static_cast<Eigen::Index>(n_states) * n_actions || jac.cols() != n_params)
        throw ValidationError("custom jacobian has wrong shape");
    double max_abs = std::max(1.0, jac.cwiseAbs().maxCoeff());
    for (int k = 0; k < n_params; ++k) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp(k) += h;
        tm(k) -= h;
        const Eigen::MatrixXd fd = (prob_fn(tp) - prob_fn(tm)) / (2.0 * h);
        for (int s = 0; s < n_states; ++s)
            for (int a = 0; a < n_actions; ++a) {
                const double diff = std::abs(fd(s, a) - jac(s * n_actions + a, k));
                if (diff / max_abs > 1e-5)
                    throw ValidationError(
                        "custom jacobian disagrees with central differences at (s=" +
                        std::to_string(s) + ",a=" + std::to_string(a) +
                        ",k=" + std::to_string(k) + "): diff=" + format_double(diff));
            }
    }
}

}  // namespace

Policy Policy::direct(Eigen::MatrixXd probs) {
    check_rows_stochastic(probs, kPostArithmeticTol, "direct policy");
    Policy p;
    p.kind_ = PolicyKind::Direct;
    p.n_states_ = static_cast<int>(probs.rows());
    p.n_actions_ = static_cast<int>(probs.cols());
    p.table_ = std::move(probs);
    return p;
}

Policy Policy::direct_uniform(int n_states, int n_actions) {
    return direct(Eigen::MatrixXd::Constant(n_states, n_actions, 1.0 / n_actions));
}

Policy Policy::softmax(Eigen::MatrixXd logits) {
    Policy p;
    p.kind_ = PolicyKind::Softmax;
    p.n_states_ = static_cast<int>(logits.rows());
    p.n_actions_ = static_cast<int>(logits.cols());
    p.table_ = std::move(logits);
    return p;
}

Policy Policy::softmax_uniform(int n_states, int n_actions) {
    return softmax(Eigen::MatrixXd::Zero(n_states, n_actions));
}

Policy Policy::custom(Eigen::VectorXd theta, int n_states, int n_actions, ProbFn prob_fn,
                      JacobianFn jacobian_fn, std::string tag) {
    const Eigen::MatrixXd probs = prob_fn(theta);
    if (probs.rows() != n_states || probs.cols() != n_actions)
        throw ValidationError("custom prob_fn output has wrong shape");
    check_rows_stochastic(probs, kPostArithmeticTol, "custom policy");
    verify_custom_jacobian(theta, n_states, n_actions, prob_fn, jacobian_fn);
    Policy p;
    p.kind_ = PolicyKind::Custom;
    p.n_states_ = n_states;
    p.n_actions_ = n_actions;
    p.custom_theta_ = std::move(theta);
    p.prob_fn_ = std::move(prob_fn);
    p.jac_fn_ = std::move(jacobian_fn);
    p.tag_ = std::move(tag);
    return p;
}

int Policy::n_params() const {
    return kind_ == PolicyKind::Custom ? static_cast<int>(custom_theta_.size())
                                       : n_states_ * n_actions_;
}

Eigen::MatrixXd Policy::action_probs() const {
    switch (kind_) {
        case PolicyKind::Direct:
            return table_;
        case PolicyKind::Softmax: {
            Eigen::MatrixXd probs(n_states_, n_actions_);
            for (int s = 0; s < n_states_; ++s) {
                const double m = table_.row(s).maxCoeff();
                probs.row(s) = (table_.row(s).array() - m).exp();
                probs.row(s) /= probs.row(s).sum();
            }
            return probs;
        }
        case PolicyKind::Custom:
            return prob_fn_(custom_theta_);
    }
    throw std::logic_error("unreachable");
}

Eigen::MatrixXd Policy::jacobian() const {
    const Eigen::Index n_rows = static_cast<Eigen::Index>(n_states_) * n_actions_;
    switch (kind_) {
        case PolicyKind::Direct:
            return Eigen::MatrixXd::Identity(n_rows, n_rows);
        case PolicyKind::Softmax: {
            Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_rows, n_rows);
            const Eigen::MatrixXd probs = action_probs();
            for (int s = 0; s < n_states_; ++s)
                for (int b = 0; b < n_actions_; ++b)
                    for (int a = 0; a < n_actions_; ++a)
                        jac(s * n_actions_ + b, s * n_actions_ + a) =
                            a == b ? probs(s, a) - probs(s, a) * probs(s, a)
                                   : -probs(s, a) * probs(s, b);
            return jac;
        }
        case PolicyKind::Custom:
            return jac_fn_(custom_theta_);
    }
    throw std::logic_error("unreachable");
}

Eigen::VectorXd Policy::flat_params() const {
    if (kind_ == PolicyKind::Custom) return custom_theta_;
    Eigen::VectorXd flat(n_states_ * n_actions_);
    for (int s = 0; s < n_states_; ++s)
        for (int a = 0; a < n_actions_; ++a) flat(s * n_actions_ + a) = table_(s, a);
    return flat;
}

Policy Policy::with_flat_params(const Eigen::VectorXd& params) const {
    Policy p = *this;
    if (kind_ == PolicyKind::Custom) {
        if (params.size() != custom_theta_.size())
            throw ValidationError("parameter size mismatch");
        p.custom_theta_ = params;
        return p;
    }
    if (params.size() != static_cast<Eigen::Index>(n_states_) * n_actions_)
        throw ValidationError("parameter size mismatch");
    for (int s = 0; s < n_states_; ++s)
        for (int a = 0; a < n_actions_; ++a) p.table_(s, a) = params(s * n_actions_ + a);
    return p;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& row) {
    if (!row.allFinite()) throw ValidationError("project_simplex requires finite entries");
    const int n = static_cast<int>(row.size());
    std::vector<double> u(row.data(), row.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double running = 0.0, tau = 0.0;
    int rho = 0;
    for (int j = 0; j < n; ++j) {
        running += u[j];
        const double candidate = (running - 1.0) / (j + 1);
        if (u[j] - candidate > 0.0) {
            rho = j + 1;
            tau = candidate;
        }
    }
    (void)rho;
    return (row.array() - tau).cwiseMax(0.0);
}

Policy shared_logit_policy(double theta, int n_states, int n_actions, std::vector<int> favored,
                           std::vector<int> other) {
    if (favored.empty() || other.empty())
        throw ValidationError("shared_logit_policy needs non-empty action groups");
    const double nf = static_cast<double>(favored.size());
    const double no = static_cast<double>(other.size());
    auto prob_fn = [=](const Eigen::VectorXd& t) {
        const double sig = 1.0 / (1.0 + std::exp(-t(0)));
        Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(n_states, n_actions);
        for (int a : favored) probs.col(a).setConstant(sig / nf);
        for (int a : other) probs.col(a).setConstant((1.0 - sig) / no);
        return probs;
    };
    auto jac_fn = [=](const Eigen::VectorXd& t) {
        const double sig = 1.0 / (1.0 + std::exp(-t(0)));
        const double d = sig * (1.0 - sig);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_states * n_actions, 1);
        for (int s = 0; s < n_states; ++s) {
            for (int a : favored) jac(s * n_actions + a, 0) = d / nf;
            for (int a : other) jac(s * n_actions + a, 0) = -d / no;
        }
        return jac;
    };
    Eigen::VectorXd t0(1);
    t0(0) = theta;
    return Policy::custom(std::move(t0), n_states, n_actions, prob_fn, jac_fn, "shared_logit");
}

namespace {

std::string tabular_theta_json(const Eigen::MatrixXd& table) {
    std::ostringstream oss;
    oss << "[";
    for (Eigen::Index s = 0; s < table.rows(); ++s) {
        oss << (s ? ", [" : "[");
        for (Eigen::Index a = 0; a < table.cols(); ++a)
            oss << (a ? ", " : "") << format_double(table(s, a));
        oss << "]";
    }
    oss << "]";
    return oss.str();
}

}  // namespace

std::string policy_to_json(const Policy& policy) {
    std::ostringstream oss;
    oss << "{\n";
    const char* variant = policy.kind() == PolicyKind::Direct    ? "direct"
                          : policy.kind() == PolicyKind::Softmax ? "softmax"
                                                                 : "custom";
    oss << "  \"variant\": \"" << variant << "\",\n";
    if (policy.kind() == PolicyKind::Custom) {
        oss << "  \"custom_kind\": \"" << policy.tag() << "\",\n";
        oss << "  \"theta\": [";
        for (Eigen::Index k = 0; k < policy.custom_params().size(); ++k)
            oss << (k ? ", " : "") << format_double(policy.custom_params()(k));
        oss << "],\n";
    } else {
        oss << "  \"theta\": " << tabular_theta_json(policy.table()) << ",\n";
    }
    oss << "  \"n_states\": " << policy.n_states() << ",\n";
    oss << "  \"n_actions\": " << policy.n_actions() << "\n}\n";
    return oss.str();
}

Policy policy_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("/: not valid JSON: ") + e.what());
    }
    for (const char* key : {"variant", "theta", "n_states", "n_actions"})
        if (!doc.contains(key)) throw ValidationError(std::string("/") + key + ": missing field");
    const std::string variant = doc["variant"].get<std::string>();
    const int n_states = doc["n_states"].get<int>();
    const int n_actions = doc["n_actions"].get<int>();

    if (variant == "custom") {
        const std::string kind = doc.value("custom_kind", std::string());
        if (kind != "shared_logit")
            throw ValidationError("/custom_kind: only \"shared_logit\" custom policies are "
                                  "reconstructible from JSON");
        const double theta = doc["theta"][0].get<double>();
        std::vector<int> favored = {0, 3}, other = {1, 2};
        if (doc.contains("favored")) favored = doc["favored"].get<std::vector<int>>();
        if (doc.contains("other")) other = doc["other"].get<std::vector<int>>();
        return shared_logit_policy(theta, n_states, n_actions, favored, other);
    }

    const auto& jt = doc["theta"];
    if (!jt.is_array() || static_cast<int>(jt.size()) != n_states)
        throw ValidationError("/theta: expected n_states rows");
    Eigen::MatrixXd table(n_states, n_actions);
    for (int s = 0; s < n_states; ++s) {
        if (static_cast<int>(jt[s].size()) != n_actions)
            throw ValidationError("/theta/" + std::to_string(s) + ": expected n_actions entries");
        for (int a = 0; a < n_actions; ++a) table(s, a) = jt[s][a].get<double>();
    }
    if (variant == "direct") return Policy::direct(std::move(table));
    if (variant == "softmax") return Policy::softmax(std::move(table));
    throw ValidationError("/variant: expected \"direct\", \"softmax\" or \"custom\"");
}

void save_policy_json(const Policy& policy, const std::string& path) {
    write_text_file(path, policy_to_json(policy));
}

Policy load_policy_json(const std::string& path) {
    return policy_from_json(read_text_file(path));
}

}  // namespace pglab

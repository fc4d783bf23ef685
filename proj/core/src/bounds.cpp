#include "pglab/bounds.hpp"

#include "pglab/errors.hpp"
#include "pglab/evaluation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pglab {

namespace {

constexpr double kAlphaTarget = 0.9;
constexpr double kBetaFloor = 1e-12;
constexpr int kMixingTMax = 500;
constexpr double kMixingTvStop = 1e-10;

// Second-largest eigenvalue modulus; the (unique, for ergodic chains)
// eigenvalue at 1 is excluded by dropping the largest modulus once.
double slem(const Eigen::MatrixXd& p) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(p, /*computeEigenvectors=*/false);
    std::vector<double> moduli;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        moduli.push_back(std::abs(solver.eigenvalues()(i)));
    auto top = std::max_element(moduli.begin(), moduli.end());
    moduli.erase(top);
    return moduli.empty() ? 0.0 : *std::max_element(moduli.begin(), moduli.end());
}

// Period of a strongly connected support graph: gcd over edges of
// (depth(u) + 1 - depth(v)) on a BFS tree. 1 means aperiodic.
int graph_period(const Eigen::MatrixXd& p) {
    const int n = static_cast<int>(p.rows());
    std::vector<int> depth(n, -1);
    std::vector<int> queue = {0};
    depth[0] = 0;
    int g = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int u = queue[head];
        for (int v = 0; v < n; ++v) {
            if (p(u, v) <= 0.0) continue;
            if (depth[v] < 0) {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            } else {
                g = std::gcd(g, std::abs(depth[u] + 1 - depth[v]));
            }
        }
    }
    return g == 0 ? 1 : g;
}

double min_transient_d0(const Mdp& mdp) {
    double m = std::numeric_limits<double>::infinity();
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.episodic() && s == mdp.absorbing_index) continue;
        m = std::min(m, mdp.d0(s));
    }
    return m;
}

}  // namespace

std::pair<int, double> estimate_absorbing_constants(const Mdp& mdp,
                                                    const std::vector<Policy>& policy_set) {
    if (!mdp.episodic())
        throw ValidationError("estimate_absorbing_constants requires an episodic MDP");
    if (policy_set.empty()) throw ValidationError("empty policy set");

    const int m_cap = 4 * mdp.n_states;
    std::vector<Eigen::MatrixXd> restricted;
    std::vector<Eigen::VectorXd> survival;  // (P~^pi)^m 1
    restricted.reserve(policy_set.size());
    for (const auto& policy : policy_set) {
        restricted.push_back(transient_restriction(mdp, induced_transition(mdp, policy)));
        survival.push_back(Eigen::VectorXd::Ones(mdp.n_states - 1));
    }

    int best_m = 0;
    double best_alpha = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= m_cap; ++m) {
        double alpha_m = 0.0;
        for (std::size_t i = 0; i < restricted.size(); ++i) {
            survival[i] = restricted[i] * survival[i];
            alpha_m = std::max(alpha_m, survival[i].maxCoeff());
        }
        if (alpha_m < best_alpha) {
            best_alpha = alpha_m;
            best_m = m;
        }
        if (alpha_m <= kAlphaTarget) return {m, alpha_m};
    }
    if (best_alpha < 1.0) return {best_m, best_alpha};
    throw AssumptionViolation("no m <= " + std::to_string(m_cap) +
                              " gives absorbing probability bound alpha < 1");
}

std::pair<double, double> estimate_mixing_constants(const Mdp& mdp,
                                                    const std::vector<Policy>& policy_set) {
    if (mdp.episodic())
        throw ValidationError("estimate_mixing_constants requires a continuing MDP");
    if (policy_set.empty()) throw ValidationError("empty policy set");

    double beta = 0.0;
    std::vector<Eigen::MatrixXd> p_mats;
    std::vector<Eigen::VectorXd> stationaries;
    for (const auto& policy : policy_set) {
        const Eigen::MatrixXd p = induced_transition(mdp, policy);
        if (graph_period(p) != 1)
            throw AssumptionViolation("periodic P^pi in the probe set (ergodicity assumption)");
        const StateDistribution d_pi = undiscounted_distribution(mdp, policy);  // irreducibility
        beta = std::max(beta, slem(p));
        p_mats.push_back(p);
        stationaries.push_back(d_pi.values);
    }
    beta = std::max(beta, kBetaFloor);

    double d_const = 0.0;
    for (std::size_t i = 0; i < p_mats.size(); ++i) {
        const Eigen::VectorXd& d_pi = stationaries[i];
        // t = 0 (rows of the identity); the discounted Neumann series starts
        // there, so the fit must cover it.
        double tv0 = 0.0;
        for (int s = 0; s < mdp.n_states; ++s) {
            Eigen::VectorXd e = -d_pi;
            e(s) += 1.0;
            tv0 = std::max(tv0, 0.5 * e.lpNorm<1>());
        }
        d_const = std::max(d_const, tv0);

        Eigen::MatrixXd power = p_mats[i];
        double beta_t = beta;
        for (int t = 1; t <= kMixingTMax && beta_t > 1e-280; ++t) {
            double tv = 0.0;
            for (int s = 0; s < mdp.n_states; ++s)
                tv = std::max(tv, 0.5 * (power.row(s).transpose() - d_pi).lpNorm<1>());
            d_const = std::max(d_const, tv / beta_t);
            if (tv < kMixingTvStop) break;
            power *= p_mats[i];
            beta_t *= beta;
        }
    }
    return {beta, d_const};
}

std::pair<double, double> mismatch_ratios(const Mdp& mdp, const Policy& policy) {
    const StateDistribution dg = discounted_distribution(mdp, policy);
    const StateDistribution dp = undiscounted_distribution(mdp, policy);
    double gamma_over_pi = 0.0, pi_over_gamma = 0.0;
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.episodic() && s == mdp.absorbing_index) continue;
        const double g = dg.values(s), p = dp.values(s);
        if (g < 1e-300 && p < 1e-300) continue;
        if (p < 1e-300 || g < 1e-300)
            throw AssumptionViolation(
                "zero distribution entry with nonzero counterpart at state " + std::to_string(s));
        gamma_over_pi = std::max(gamma_over_pi, g / p);
        pi_over_gamma = std::max(pi_over_gamma, p / g);
    }
    return {gamma_over_pi, pi_over_gamma};
}

BoundValues bound_values(const MismatchConstants& k, double gamma, double min_d0) {
    BoundValues out;
    if (k.m > 0 && std::isfinite(k.alpha)) {
        const double gm = std::pow(gamma, k.m);
        out.eq8 = (1.0 - k.alpha * gm) / (std::pow(gamma, k.m - 1) * (1.0 - k.alpha));
        if (min_d0 > 0.0)
            out.eq9 = gamma + k.m * (1.0 - gm) / ((1.0 - k.alpha) * (1.0 - k.alpha * gm) * min_d0);
    }
    if (std::isfinite(k.beta) && std::isfinite(k.d_const)) {
        const double common = 2.0 * (1.0 - gamma) * k.d_const / (1.0 - gamma * k.beta);
        if (k.c_min > 0.0) out.eq11 = 1.0 + common / k.c_min;
        if (k.c_min_gamma > 0.0) out.eq12 = 1.0 + common / k.c_min_gamma;
    }
    return out;
}

AbcConstants abc_constants(const Mdp& mdp, const MismatchConstants& k, double gamma) {
    AbcConstants out;
    out.sigma = k.g_const * mdp.r_max * mdp.n_actions / (1.0 - gamma);
    if (mdp.episodic()) {
        const double gm = std::pow(gamma, k.m);
        out.b = std::pow(gamma, k.m - 1) * (1.0 - k.alpha) / (1.0 - k.alpha * gm);
        out.c = (1.0 - out.b) * out.sigma * out.sigma;
    } else {
        const double x = (1.0 - gamma * k.beta) * k.c_min;
        const double y = 2.0 * (1.0 - gamma) * k.d_const;
        out.b = x / (x + y);
        out.c = y * out.sigma * out.sigma / (x + y);
    }
    out.big_b = out.b * out.b;
    out.big_c = out.sigma > 0.0 ? out.c * out.c / (out.sigma * out.sigma) + 2.0 * out.b * out.c
                                : 2.0 * out.b * out.c;
    return out;
}

AbcSlack check_abc_inequalities(const GradientReport& report, const AbcConstants& k) {
    AbcSlack slack;
    const double norm_u2 = report.norm_unbiased * report.norm_unbiased;
    const double norm_b2 = report.norm_biased * report.norm_biased;
    slack.inner_slack = report.inner_biased_unbiased - (k.b * norm_u2 - k.c);
    slack.norm_slack = (k.big_b * norm_u2 + k.big_c) - norm_b2;
    return slack;
}

std::pair<double, double> gradient_domination_certificate(const Mdp& mdp, const Policy& policy,
                                                          const Policy& pi_star) {
    if (policy.kind() != PolicyKind::Direct)
        throw ValidationError("gradient domination certificate requires a Direct policy");
    const ValueBundle vb = evaluate(mdp, policy);
    const ValueBundle vb_star = evaluate(mdp, pi_star);
    const double lhs = vb_star.j - vb.j;

    const StateDistribution d_star_gamma = discounted_distribution(mdp, pi_star);
    const StateDistribution d_pi = undiscounted_distribution(mdp, policy);
    double ratio = 0.0;
    for (int s = 0; s < mdp.n_states; ++s) {
        if (mdp.episodic() && s == mdp.absorbing_index) continue;
        const double num = d_star_gamma.values(s), den = d_pi.values(s);
        if (num < 1e-300 && den < 1e-300) continue;
        if (den < 1e-300)
            throw AssumptionViolation("d_pi vanishes where d_{pi*,gamma} does not, state " +
                                      std::to_string(s));
        ratio = std::max(ratio, num / den);
    }

    // max over pi_bar of (pi_bar - pi)^T grad: per state, the best entry of
    // the biased-gradient row against the policy's mixture.
    const Eigen::MatrixXd probs = policy.action_probs();
    double max_term = 0.0;
    for (int s = 0; s < mdp.n_states; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        double mixture = 0.0;
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double g = d_pi.values(s) * vb.q(s, a);
            best = std::max(best, g);
            mixture += probs(s, a) * g;
        }
        max_term += best - mixture;
    }
    return {lhs, vb_star.kappa * ratio * max_term};
}

RegularityEstimate estimate_regularity(const Mdp& mdp,
                                       const std::vector<Policy>& policy_samples) {
    if (policy_samples.size() < 2)
        throw ValidationError("estimate_regularity needs at least 2 policy samples");
    const PolicyKind kind = policy_samples.front().kind();
    for (const auto& p : policy_samples)
        if (p.kind() != kind)
            throw ValidationError("estimate_regularity needs samples of one variant");

    RegularityEstimate out;
    out.c_min = std::numeric_limits<double>::infinity();
    out.c_min_gamma = std::numeric_limits<double>::infinity();

    std::vector<Eigen::VectorXd> true_grads;
    std::vector<Eigen::VectorXd> thetas;
    for (const auto& policy : policy_samples) {
        const Eigen::MatrixXd jac = policy.jacobian();
        for (Eigen::Index r = 0; r < jac.rows(); ++r)
            out.g_const = std::max(out.g_const, jac.row(r).norm());

        const ValueBundle vb = evaluate(mdp, policy);
        const StateDistribution dg = discounted_distribution(mdp, policy);
        const StateDistribution dp = undiscounted_distribution(mdp, policy);
        for (int s = 0; s < mdp.n_states; ++s) {
            if (mdp.episodic() && s == mdp.absorbing_index) continue;
            out.c_min = std::min(out.c_min, dp.values(s));
            out.c_min_gamma = std::min(out.c_min_gamma, dg.values(s));
        }
        true_grads.push_back(vb.kappa *
                             expectation_gradient_with_values(policy, vb.q, vb.adv, dg.values));
        thetas.push_back(policy.flat_params());
    }

    if (kind == PolicyKind::Softmax)
        out.g_analytic = std::sqrt(0.125);  // see header: 2 p^2(1-p)^2 <= 1/8
    else if (kind == PolicyKind::Direct)
        out.g_analytic = 1.0;

    for (std::size_t i = 0; i < true_grads.size(); ++i)
        for (std::size_t j = i + 1; j < true_grads.size(); ++j) {
            const double dt = (thetas[i] - thetas[j]).norm();
            if (dt < 1e-15) continue;  // identical-theta pairs are excluded
            out.l_estimate =
                std::max(out.l_estimate, (true_grads[i] - true_grads[j]).norm() / dt);
        }
    return out;
}

BoundReport bound_report(const Mdp& mdp, const std::vector<Policy>& probe_set) {
    if (probe_set.empty()) throw ValidationError("bound_report needs a non-empty probe set");
    BoundReport rep;
    rep.kind = mdp.kind;
    rep.gamma = mdp.gamma;
    rep.probe_policies = static_cast<int>(probe_set.size());
    rep.min_d0 = min_transient_d0(mdp);

    // Regularity constants are parameterization-specific: estimate them over
    // the largest same-variant subset of the probe set.
    std::vector<Policy> by_kind[3];
    for (const auto& p : probe_set) by_kind[static_cast<int>(p.kind())].push_back(p);
    const std::vector<Policy>* reg_set = &by_kind[0];
    for (const auto& group : by_kind)
        if (group.size() > reg_set->size()) reg_set = &group;
    if (reg_set->size() >= 2) {
        const RegularityEstimate reg = estimate_regularity(mdp, *reg_set);
        rep.constants.g_const = reg.g_const;
        rep.constants.g_analytic = reg.g_analytic;
        rep.constants.l_estimate = reg.l_estimate;
    }

    if (mdp.episodic()) {
        auto [m, alpha] = estimate_absorbing_constants(mdp, probe_set);
        rep.constants.m = m;
        rep.constants.alpha = alpha;
    } else {
        auto [beta, d_const] = estimate_mixing_constants(mdp, probe_set);
        rep.constants.beta = beta;
        rep.constants.d_const = d_const;
    }

    // c_min, c_min_gamma, sup ratios and kappa over the full probe set.
    rep.constants.c_min = std::numeric_limits<double>::infinity();
    rep.constants.c_min_gamma = std::numeric_limits<double>::infinity();
    for (const auto& policy : probe_set) {
        const StateDistribution dg = discounted_distribution(mdp, policy);
        const StateDistribution dp = undiscounted_distribution(mdp, policy);
        for (int s = 0; s < mdp.n_states; ++s) {
            if (mdp.episodic() && s == mdp.absorbing_index) continue;
            rep.constants.c_min = std::min(rep.constants.c_min, dp.values(s));
            rep.constants.c_min_gamma = std::min(rep.constants.c_min_gamma, dg.values(s));
            const double g = dg.values(s), p = dp.values(s);
            if (g < 1e-300 && p < 1e-300) continue;
            if (p < 1e-300 || g < 1e-300)
                throw AssumptionViolation("zero distribution entry in the probe set, state " +
                                          std::to_string(s));
            rep.ratio_dgamma_over_dpi = std::max(rep.ratio_dgamma_over_dpi, g / p);
            rep.ratio_dpi_over_dgamma = std::max(rep.ratio_dpi_over_dgamma, p / g);
        }
        rep.kappa = std::max(rep.kappa, evaluate(mdp, policy).kappa);
    }

    rep.bounds = bound_values(rep.constants, mdp.gamma, rep.min_d0);
    if (mdp.episodic()) {
        rep.margin_dgamma_over_dpi = rep.bounds.eq8 - rep.ratio_dgamma_over_dpi;
        rep.margin_dpi_over_dgamma = rep.bounds.eq9 - rep.ratio_dpi_over_dgamma;
    } else {
        rep.margin_dgamma_over_dpi = rep.bounds.eq11 - rep.ratio_dgamma_over_dpi;
        rep.margin_dpi_over_dgamma = rep.bounds.eq12 - rep.ratio_dpi_over_dgamma;
    }

    // ABC constants use the analytic gradient cap when one exists (a true
    // uniform bound); the empirical max otherwise.
    MismatchConstants with_g = rep.constants;
    if (std::isfinite(rep.constants.g_analytic)) with_g.g_const = rep.constants.g_analytic;
    rep.abc = abc_constants(mdp, with_g, mdp.gamma);
    return rep;
}

}  // namespace pglab

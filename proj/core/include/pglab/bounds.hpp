#pragma once

#include "pglab/gradient.hpp"
#include "pglab/mdp.hpp"
#include "pglab/policy.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace pglab {

/// Constants certified over an explicit probe set of policies. They certify
/// the universally quantified assumptions only for that set: alpha and beta
/// are exact maxima over the probed policies, c_min / c_min_gamma are
/// empirical upper bounds on the true infima, l_estimate is a certified lower
/// bound on the true smoothness constant.
struct MismatchConstants {
    int m = 0;
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = std::numeric_limits<double>::quiet_NaN();
    double d_const = std::numeric_limits<double>::quiet_NaN();
    double c_min = std::numeric_limits<double>::quiet_NaN();
    double c_min_gamma = std::numeric_limits<double>::quiet_NaN();
    double g_const = std::numeric_limits<double>::quiet_NaN();
    double g_analytic = std::numeric_limits<double>::quiet_NaN();
    double l_estimate = std::numeric_limits<double>::quiet_NaN();
};

struct BoundValues {
    double eq8 = std::numeric_limits<double>::quiet_NaN();   ///< episodic ||dg/dp||_inf bound
    double eq9 = std::numeric_limits<double>::quiet_NaN();   ///< episodic ||dp/dg||_inf bound
    double eq11 = std::numeric_limits<double>::quiet_NaN();  ///< continuing ||dg/dp||_inf bound
    double eq12 = std::numeric_limits<double>::quiet_NaN();  ///< continuing ||dp/dg||_inf bound
};

struct AbcConstants {
    double sigma = 0.0;
    double b = 0.0;
    double c = 0.0;
    double big_b = 0.0;
    double big_c = 0.0;
};

/// Slack of the two biased-gradient inequalities (negative beyond -1e-10
/// means violation):
///   inner_slack = <unbiased, biased> - (b ||unbiased||^2 - c)
///   norm_slack  = (B ||unbiased||^2 + C) - ||biased||^2
struct AbcSlack {
    double inner_slack = 0.0;
    double norm_slack = 0.0;
};

struct BoundReport {
    MdpKind kind = MdpKind::Continuing;
    double gamma = 0.0;
    MismatchConstants constants;
    AbcConstants abc;
    double kappa = 0.0;
    double min_d0 = 0.0;  ///< over transient states when episodic
    double ratio_dgamma_over_dpi = 0.0;
    double ratio_dpi_over_dgamma = 0.0;
    BoundValues bounds;
    double margin_dgamma_over_dpi = 0.0;  ///< bound - measured sup ratio
    double margin_dpi_over_dgamma = 0.0;
    int probe_policies = 0;
};

/// Smallest m with alpha(m) = max over the probe set of ||(P~^pi)^m 1||_inf
/// at most 0.9 (m capped at 4*n_states, then the best m found). Throws
/// AssumptionViolation when no probed power is substochastic below 1.
std::pair<int, double> estimate_absorbing_constants(const Mdp& mdp,
                                                    const std::vector<Policy>& policy_set);

/// (beta, D) with beta the largest second-largest-eigenvalue modulus over the
/// probe set and D = max over policies and t of TV(t)/beta^t, TV(t) =
/// max_s ||(P^pi)^t(s,.) - d_pi||_TV. The fit includes t = 0, which the
/// discounted Neumann series requires. Throws AssumptionViolation for a
/// non-ergodic member.
std::pair<double, double> estimate_mixing_constants(const Mdp& mdp,
                                                    const std::vector<Policy>& policy_set);

/// Sup-norms of the pointwise quotients d_{pi,gamma}/d_pi and its reciprocal,
/// over transient states (episodic) or all states (continuing).
std::pair<double, double> mismatch_ratios(const Mdp& mdp, const Policy& policy);

/// The four closed-form mismatch bounds; min_d0 enters eq9 only.
BoundValues bound_values(const MismatchConstants& constants, double gamma, double min_d0);

/// sigma = G R_max |A| / (1-gamma); episodic b = gamma^{m-1}(1-alpha)/(1-alpha
/// gamma^m), continuing b = (1-gamma beta)c_min / ((1-gamma beta)c_min +
/// 2(1-gamma)D); c = (1-b) sigma^2 in both branches; B = b^2, C = c^2/sigma^2
/// + 2bc.
AbcConstants abc_constants(const Mdp& mdp, const MismatchConstants& constants, double gamma);

AbcSlack check_abc_inequalities(const GradientReport& report, const AbcConstants& constants);

/// Gradient-domination certificate for Direct parameterizations:
///   lhs = J(pi_star) - J(pi)
///   rhs = kappa_{pi_star} ||d_{pi_star,gamma}/d_pi||_inf
///         max_{pi_bar} (pi_bar - pi)^T grad_biased(pi)
/// The max over pi_bar is exact: per state, the best action under the biased
/// gradient row.
std::pair<double, double> gradient_domination_certificate(const Mdp& mdp, const Policy& policy,
                                                          const Policy& pi_star);

struct RegularityEstimate {
    double g_const = 0.0;     ///< max ||d pi(a|s)/d theta|| over samples
    double g_analytic = std::numeric_limits<double>::quiet_NaN();
    double l_estimate = 0.0;  ///< max ||grad J(t1)-grad J(t2)|| / ||t1-t2||
    double c_min = 0.0;
    double c_min_gamma = 0.0;
};

/// Empirical regularity constants over >= 2 policy samples of one variant.
/// For tabular softmax g_analytic is the exact uniform cap sqrt(1/8): with
/// p = pi(a|s), ||grad pi(a|s)||^2 = p^2[(1-p)^2 + sum_{b!=a} pi_b^2]
/// <= 2 p^2 (1-p)^2 <= 1/8, attained at p = 1/2 with the remaining mass on a
/// single action. For Direct rows the cap is exactly 1.
RegularityEstimate estimate_regularity(const Mdp& mdp, const std::vector<Policy>& policy_samples);

/// Full per-(mdp, gamma) report over a probe set: constants, measured sup
/// ratios (maxima over the set), bound values, margins, ABC constants.
BoundReport bound_report(const Mdp& mdp, const std::vector<Policy>& probe_set);

}  // namespace pglab

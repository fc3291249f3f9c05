#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskavi/risk.hpp"

namespace riskavi {

/// Inputs for the sample-complexity calculators.  The weighting constants
/// (C_rho_mu, inherent Bellman error, deviation bound B) are user-supplied:
/// no general-model computation exists for them.
struct BoundInputs {
    RiskSpec risk;
    double gamma = 0.6;
    double j_max = 1.0;
    double s_max = 1.0;
    double eps = 0.1;      // target accuracy
    double delta = 0.05;   // failure probability
    double p_norm = 2.0;
    double eps_g = 0.1;    // granularity for the dominance analysis
    double delta1 = 0.025;
    double delta2 = 0.0125;
    double kappa_c = 1.0;  // cost Lipschitz constant
    double kappa_mu = 1.0; // distributional-set Lipschitz constant
    double c_rho_mu = 1.0; // performance-weighting concentrability constant
    double inherent_bellman_error = 0.0;
    int pseudo_dim = 1;
    std::int64_t n_states = 1;
    std::int64_t n_actions = 1;

    void validate() const;
};

struct BoundReport {
    std::int64_t iterations = 0;   // K
    std::int64_t n = 0;            // sampled/net states per iteration
    std::int64_t m = 0;            // transition samples per (state, action)
    double epsilon_net = 0.0;      // net fineness (sup-norm plan only)
    double failure_prob = 0.0;
    std::string guarantee;
};

/// Concentrability coefficient C_mu of the one-step distributional set:
/// 1/(1-alpha) for CVaR, 1 + 2 B b for mean-deviation.  Other kinds have no
/// published formula and are rejected.
double c_mu_coefficient(const RiskSpec& risk, double b_bound);

/// Closed-form stationary law of the dominating birth-reset chain on
/// {1, ..., k_star}: mu(1) = p^(K*-1), mu(i) = (1-p) p^(K*-i), mu(K*) = 1-p.
std::vector<double> stationary_distribution(double p_good, int k_star);

/// Mixing-time bound ln(1 / (delta2 * mu_min)).
double mixing_time_bound(double delta2, double mu_min);

/// Iteration count for the dominance analysis: K* = ceil(J_max / eps_g)
/// cells, then ceil(ln(1 / (delta2 * mu_min))).
std::int64_t dominance_iterations(double eps_g, double delta2, double j_max, double p_good);

/// Sup-norm plan: net fineness, net size, and the minimal m with
/// theta(eps / (2 gamma), m) <= delta / (n |A| K).
BoundReport supnorm_plan(const BoundInputs& inputs, std::int64_t iterations);

/// p-norm plan: K from the contraction tail, n from the covering-number
/// inequality (fixed point), m by inverting theta at the rescaled accuracy.
BoundReport pnorm_plan(const BoundInputs& inputs);

/// Haussler-style covering-number bound e (D+1) (2 e J_max / eps)^D.
double covering_number_bound(int pseudo_dim, double eps, double j_max, std::int64_t n);

struct SampleRatio {
    double m1 = 0.0;
    double m2 = 0.0;
    double ratio = 0.0;
};

/// Per-iteration sample counts of the contraction analysis (m1) versus the
/// stochastic-dominance analysis (m2), with theta(eps, m) = C exp(-m eps^2),
/// and their ratio.  c_const is the estimator constant C; it enters the
/// formulas through the product |S| |A| C.
SampleRatio sample_ratio(double gamma, std::int64_t iterations, double eps, double delta,
                         double j_max, std::int64_t n_states, std::int64_t n_actions,
                         double c_const);

/// Smallest m with theta_bound(risk, eps, m, j_max) <= target, by integer
/// bisection; theta is nonincreasing in m.
std::int64_t invert_theta(const RiskSpec& risk, double eps, double target, double j_max);

}  // namespace riskavi

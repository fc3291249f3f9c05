#include "riskavi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace riskavi {

namespace {

constexpr std::int64_t kMaxSamples = std::int64_t{1} << 62;

void check_prob(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream os;
        os << name << " must lie in (0, 1)";
        throw std::invalid_argument(os.str());
    }
}

void check_pos(double v, const char* name) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << name << " must be positive";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

void BoundInputs::validate() const {
    risk.validate();
    check_prob(gamma, "gamma");
    check_pos(j_max, "j_max");
    check_pos(s_max, "s_max");
    check_pos(eps, "eps");
    check_prob(delta, "delta");
    if (!(p_norm >= 1.0)) throw std::invalid_argument("p_norm must be >= 1");
    check_pos(eps_g, "eps_g");
    check_prob(delta1, "delta1");
    check_prob(delta2, "delta2");
    check_pos(kappa_c, "kappa_c");
    check_pos(kappa_mu, "kappa_mu");
    check_pos(c_rho_mu, "c_rho_mu");
    if (inherent_bellman_error < 0.0)
        throw std::invalid_argument("inherent_bellman_error must be nonnegative");
    if (pseudo_dim < 0) throw std::invalid_argument("pseudo_dim must be nonnegative");
    if (n_states < 1 || n_actions < 1)
        throw std::invalid_argument("state/action counts must be >= 1");
}

double c_mu_coefficient(const RiskSpec& risk, double b_bound) {
    risk.validate();
    switch (risk.kind) {
        case RiskKind::CVaR:
            return 1.0 / (1.0 - risk.alpha);
        case RiskKind::MeanDeviation:
            if (!(b_bound >= 0.0))
                throw std::invalid_argument("c_mu_coefficient: B bound must be nonnegative");
            return 1.0 + 2.0 * b_bound * risk.b;
        default:
            throw std::invalid_argument(
                "c_mu_coefficient: no published formula for " + to_string(risk.kind));
    }
}

std::vector<double> stationary_distribution(double p_good, int k_star) {
    check_prob(p_good, "p_good");
    if (k_star < 2) throw std::invalid_argument("k_star must be >= 2");
    std::vector<double> mu(static_cast<std::size_t>(k_star));
    mu[0] = std::pow(p_good, k_star - 1);
    for (int i = 2; i <= k_star - 1; ++i)
        mu[static_cast<std::size_t>(i - 1)] = (1.0 - p_good) * std::pow(p_good, k_star - i);
    mu[static_cast<std::size_t>(k_star - 1)] = 1.0 - p_good;
    return mu;
}

double mixing_time_bound(double delta2, double mu_min) {
    check_prob(delta2, "delta2");
    check_prob(mu_min, "mu_min");
    return std::log(1.0 / (delta2 * mu_min));
}

std::int64_t dominance_iterations(double eps_g, double delta2, double j_max, double p_good) {
    check_pos(eps_g, "eps_g");
    check_pos(j_max, "j_max");
    const auto k_star = static_cast<std::int64_t>(std::ceil(j_max / eps_g));
    if (k_star < 2)
        throw std::invalid_argument(
            "dominance_iterations: granularity yields K* < 2; the dominating chain "
            "needs at least two error levels");
    const std::vector<double> mu =
        stationary_distribution(p_good, static_cast<int>(k_star));
    const double mu_min = *std::min_element(mu.begin(), mu.end());
    return static_cast<std::int64_t>(std::ceil(mixing_time_bound(delta2, mu_min)));
}

std::int64_t invert_theta(const RiskSpec& risk, double eps, double target, double j_max) {
    check_pos(eps, "eps");
    check_pos(target, "target");
    if (theta_bound(risk, eps, 1, j_max) <= target) return 1;
    std::int64_t lo = 1, hi = 2;
    while (theta_bound(risk, eps, hi, j_max) > target) {
        if (hi >= kMaxSamples)
            throw std::runtime_error("invert_theta: required sample count exceeds 2^62");
        hi *= 2;
    }
    // invariant: theta(lo) > target >= theta(hi)
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (theta_bound(risk, eps, mid, j_max) > target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

BoundReport supnorm_plan(const BoundInputs& inputs, std::int64_t iterations) {
    inputs.validate();
    if (iterations < 1) throw std::invalid_argument("supnorm_plan: iterations must be >= 1");

    BoundReport report;
    report.iterations = iterations;
    report.epsilon_net =
        inputs.eps / (2.0 * (inputs.kappa_c + inputs.gamma * inputs.kappa_mu * inputs.j_max));
    report.n = static_cast<std::int64_t>(std::ceil(inputs.s_max / report.epsilon_net));

    const double per_iteration_target =
        inputs.delta / (static_cast<double>(report.n) * static_cast<double>(inputs.n_actions) *
                        static_cast<double>(iterations));
    report.m = invert_theta(inputs.risk, inputs.eps / (2.0 * inputs.gamma),
                            per_iteration_target, inputs.j_max);

    const double p_mn = static_cast<double>(report.n) * static_cast<double>(inputs.n_actions) *
                        theta_bound(inputs.risk, inputs.eps / (2.0 * inputs.gamma), report.m,
                                    inputs.j_max);
    report.failure_prob = std::min(1.0, static_cast<double>(iterations) * p_mn);

    std::ostringstream os;
    os << "P(||J_K - J*||_inf <= " << std::pow(inputs.gamma, static_cast<double>(iterations)) *
            inputs.j_max
       << " + " << inputs.eps / (1.0 - inputs.gamma) << ") >= " << 1.0 - report.failure_prob;
    report.guarantee = os.str();
    return report;
}

double covering_number_bound(int pseudo_dim, double eps, double j_max, std::int64_t n) {
    if (pseudo_dim < 0) throw std::invalid_argument("pseudo_dim must be nonnegative");
    check_pos(eps, "eps");
    check_pos(j_max, "j_max");
    (void)n;  // the pseudo-dimension bound is uniform in the sample count
    const double e = std::exp(1.0);
    return e * (pseudo_dim + 1) * std::pow(2.0 * e * j_max / eps, pseudo_dim);
}

BoundReport pnorm_plan(const BoundInputs& inputs) {
    inputs.validate();
    const double p = inputs.p_norm;
    const double gamma = inputs.gamma;
    const double c_pow = std::pow(inputs.c_rho_mu, 1.0 / p);
    const double one_minus_sq = (1.0 - gamma) * (1.0 - gamma);

    BoundReport report;

    // K from the contraction tail: gamma^K <= [eta (1-gamma)^2 / (2 gamma J_max)]^p
    // with eta = eps / 2.
    const double eta = inputs.eps / 2.0;
    const double k_raw =
        p * std::log(2.0 * gamma * inputs.j_max / (eta * one_minus_sq)) / std::log(1.0 / gamma);
    report.iterations = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(k_raw)));

    // Per-iteration fitting accuracy.
    const double eps_prime = inputs.eps * one_minus_sq / (4.0 * gamma * c_pow);

    // n from the covering-number inequality; the adopted covering bound does
    // not depend on n, so the fixed point settles after one step, but the
    // loop guards against future n-dependent bounds.
    const double cover_eps = std::pow(eps_prime / 4.0, p) / 8.0;
    const double log_delta = std::log(1.0 / inputs.delta);
    double n_curr = 1000.0;
    bool converged = false;
    for (int iter = 0; iter < 50; ++iter) {
        const double cover =
            covering_number_bound(inputs.pseudo_dim, cover_eps, inputs.j_max,
                                  static_cast<std::int64_t>(n_curr));
        const double n_next = 128.0 * std::pow(8.0 * inputs.j_max / eps_prime, 2.0 * p) *
                              (log_delta + std::log(32.0 * cover));
        if (std::abs(n_next - n_curr) <= 0.5) {
            n_curr = n_next;
            converged = true;
            break;
        }
        n_curr = n_next;
    }
    if (!converged || !std::isfinite(n_curr))
        throw std::runtime_error("pnorm_plan: covering-number fixed point did not converge");
    if (n_curr >= static_cast<double>(kMaxSamples))
        throw std::runtime_error("pnorm_plan: required n exceeds 2^62");
    report.n = static_cast<std::int64_t>(std::floor(n_curr)) + 1;

    // m inverts theta at accuracy eps (1-gamma)^2 / (16 gamma C^(1/p)) with
    // confidence delta / (4 n |A| K).
    const double m_accuracy = inputs.eps * one_minus_sq / (16.0 * gamma * c_pow);
    const double m_target =
        inputs.delta / (4.0 * static_cast<double>(report.n) *
                        static_cast<double>(inputs.n_actions) *
                        static_cast<double>(report.iterations));
    report.m = invert_theta(inputs.risk, m_accuracy, m_target, inputs.j_max);
    report.failure_prob = inputs.delta;

    std::ostringstream os;
    os << "P(||J^pi_K - J*||_{p,rho} <= "
       << 2.0 * gamma / one_minus_sq * c_pow * inputs.inherent_bellman_error << " + "
       << inputs.eps << ") >= " << 1.0 - inputs.delta;
    report.guarantee = os.str();
    return report;
}

SampleRatio sample_ratio(double gamma, std::int64_t iterations, double eps, double delta,
                         double j_max, std::int64_t n_states, std::int64_t n_actions,
                         double c_const) {
    check_prob(gamma, "gamma");
    check_pos(eps, "eps");
    check_prob(delta, "delta");
    check_pos(j_max, "j_max");
    check_pos(c_const, "c_const");
    if (n_states < 1 || n_actions < 1)
        throw std::invalid_argument("state/action counts must be >= 1");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");

    const double k = static_cast<double>(iterations);
    const double tail = 2.0 * std::pow(gamma, k) * j_max;
    if (!(eps > tail)) {
        const std::int64_t k_min = static_cast<std::int64_t>(
            std::ceil(std::log(eps / (2.0 * j_max)) / std::log(gamma))) + 1;
        std::ostringstream os;
        os << "sample_ratio: eps(1-gamma) must exceed 2 gamma^K J_max (1-gamma); "
              "smallest valid K is " << k_min;
        throw std::invalid_argument(os.str());
    }

    const double combined =
        static_cast<double>(n_states) * static_cast<double>(n_actions) * c_const;
    const double per_iter = 1.0 - std::pow(1.0 - delta, 1.0 / k);

    const double denom1 = (eps - tail) * (1.0 - gamma);
    const double m1 = 4.0 * gamma * gamma / (denom1 * denom1) * std::log(combined / per_iter);

    const auto k_star = static_cast<double>(
        static_cast<std::int64_t>(std::ceil(j_max / eps)));
    const double mu1 = std::pow(1.0 - delta, (k_star - 1.0) / k);
    const double mu2 = per_iter * std::pow(1.0 - delta, (k_star - 2.0) / k);
    const double mu_min = std::min(mu1, mu2);
    const double slack = delta - 2.0 / (std::exp(k) * mu_min);
    if (!(slack > 0.0))
        throw std::invalid_argument("sample_ratio: K too small for the dominance analysis");
    const double m2 = 4.0 * gamma * gamma / (eps * eps) * std::log(combined / slack);

    return SampleRatio{m1, m2, m1 / m2};
}

}  // namespace riskavi

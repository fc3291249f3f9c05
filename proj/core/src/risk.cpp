#include "riskavi/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace riskavi {

namespace {

constexpr double kProbTol = 1e-12;

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in [0, 1)");
}

void check_slopes(double beta1, double beta2) {
    if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 > 1.0))
        throw std::invalid_argument("OCE slopes must satisfy 0 <= beta1 < 1 < beta2");
}

void check_deviation(double b, double p_order) {
    if (!(b >= 0.0)) throw std::invalid_argument("risk price b must be nonnegative");
    if (!(p_order >= 1.0)) throw std::invalid_argument("deviation order p must be >= 1");
}

void check_samples(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("empty sample set");
}

double sample_mean(std::span<const double> samples) {
    double s = std::accumulate(samples.begin(), samples.end(), 0.0);
    return s / static_cast<double>(samples.size());
}

// OCE utility on the cost side: slope beta2 above the certainty level,
// beta1 below, convex since beta2 > 1 > beta1.
double oce_utility(double x, double beta1, double beta2) {
    return x >= 0.0 ? beta2 * x : beta1 * x;
}

}  // namespace

std::string to_string(RiskKind kind) {
    switch (kind) {
        case RiskKind::Expectation: return "expectation";
        case RiskKind::MeanDeviation: return "mean-deviation";
        case RiskKind::MeanSemideviation: return "mean-semideviation";
        case RiskKind::OCE: return "oce";
        case RiskKind::CVaR: return "cvar";
    }
    throw std::logic_error("unknown RiskKind");
}

RiskKind risk_kind_from_string(const std::string& name) {
    if (name == "expectation") return RiskKind::Expectation;
    if (name == "mean-deviation") return RiskKind::MeanDeviation;
    if (name == "mean-semideviation") return RiskKind::MeanSemideviation;
    if (name == "oce") return RiskKind::OCE;
    if (name == "cvar") return RiskKind::CVaR;
    throw std::invalid_argument("unknown risk kind: " + name);
}

RiskSpec RiskSpec::expectation() {
    return RiskSpec{};
}

RiskSpec RiskSpec::cvar(double alpha) {
    RiskSpec s;
    s.kind = RiskKind::CVaR;
    s.alpha = alpha;
    s.validate();
    return s;
}

RiskSpec RiskSpec::oce(double beta1, double beta2) {
    RiskSpec s;
    s.kind = RiskKind::OCE;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.validate();
    return s;
}

RiskSpec RiskSpec::mean_deviation(double b, double p_order) {
    RiskSpec s;
    s.kind = RiskKind::MeanDeviation;
    s.b = b;
    s.p_order = p_order;
    s.validate();
    return s;
}

RiskSpec RiskSpec::mean_semideviation(double b, double p_order) {
    RiskSpec s;
    s.kind = RiskKind::MeanSemideviation;
    s.b = b;
    s.p_order = p_order;
    s.validate();
    return s;
}

void RiskSpec::validate() const {
    switch (kind) {
        case RiskKind::Expectation:
            break;
        case RiskKind::CVaR:
            check_alpha(alpha);
            break;
        case RiskKind::OCE:
            check_slopes(beta1, beta2);
            break;
        case RiskKind::MeanDeviation:
        case RiskKind::MeanSemideviation:
            check_deviation(b, p_order);
            break;
    }
}

std::string RiskSpec::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    switch (kind) {
        case RiskKind::Expectation: break;
        case RiskKind::CVaR: os << "(alpha=" << alpha << ")"; break;
        case RiskKind::OCE: os << "(beta1=" << beta1 << ", beta2=" << beta2 << ")"; break;
        case RiskKind::MeanDeviation:
        case RiskKind::MeanSemideviation:
            os << "(b=" << b << ", p=" << p_order << ")";
            break;
    }
    return os.str();
}

void SampleSet::validate() const {
    if (values.empty()) throw std::invalid_argument("SampleSet must contain at least one value");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("SampleSet values must be finite");
}

DiscreteDist DiscreteDist::point_mass(double value) {
    return DiscreteDist{{value}, {1.0}};
}

void DiscreteDist::validate() const {
    if (values.size() != probs.size())
        throw std::invalid_argument("DiscreteDist: values/probs length mismatch");
    if (values.empty()) throw std::invalid_argument("DiscreteDist: no atoms");
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("DiscreteDist: non-finite atom value");
        if (!(probs[i] > 0.0))
            throw std::invalid_argument("DiscreteDist: probabilities must be strictly positive");
        total += probs[i];
    }
    if (std::abs(total - 1.0) > kProbTol)
        throw std::invalid_argument("DiscreteDist: probabilities must sum to 1");
}

double cvar_empirical(std::span<const double> samples, double alpha) {
    check_alpha(alpha);
    check_samples(samples);
    const std::size_t m = samples.size();
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    // suffix[k] = sum of sorted[k..m-1]
    std::vector<double> suffix(m + 1, 0.0);
    for (std::size_t k = m; k-- > 0;) suffix[k] = suffix[k + 1] + sorted[k];

    const double scale = 1.0 / (static_cast<double>(m) * (1.0 - alpha));
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
        const double eta = sorted[k];
        const double above = suffix[k] - static_cast<double>(m - k) * eta;
        const double obj = eta + scale * above;
        if (obj < best) best = obj;
    }
    return best;
}

double oce_empirical(std::span<const double> samples, double beta1, double beta2) {
    check_slopes(beta1, beta2);
    check_samples(samples);
    const std::size_t m = samples.size();
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> prefix(m + 1, 0.0);  // prefix[k] = sum of sorted[0..k-1]
    for (std::size_t k = 0; k < m; ++k) prefix[k + 1] = prefix[k] + sorted[k];
    const double total = prefix[m];

    const double inv_m = 1.0 / static_cast<double>(m);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) {
        const double eta = sorted[k];
        const double above = (total - prefix[k + 1]) - static_cast<double>(m - k - 1) * eta;
        const double below = static_cast<double>(k) * eta - prefix[k];
        const double obj = eta + inv_m * (beta2 * above - beta1 * below);
        if (obj < best) best = obj;
    }
    return best;
}

double mean_deviation_empirical(std::span<const double> samples, double b, double p_order) {
    check_deviation(b, p_order);
    check_samples(samples);
    const double mean = sample_mean(samples);
    double moment = 0.0;
    for (double v : samples) moment += std::pow(std::abs(v - mean), p_order);
    moment /= static_cast<double>(samples.size());
    return mean + b * std::pow(moment, 1.0 / p_order);
}

double mean_semideviation_empirical(std::span<const double> samples, double b, double p_order) {
    check_deviation(b, p_order);
    check_samples(samples);
    const double mean = sample_mean(samples);
    double moment = 0.0;
    for (double v : samples) moment += std::pow(std::max(v - mean, 0.0), p_order);
    moment /= static_cast<double>(samples.size());
    return mean + b * std::pow(moment, 1.0 / p_order);
}

double risk_empirical(std::span<const double> samples, const RiskSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case RiskKind::Expectation:
            check_samples(samples);
            return sample_mean(samples);
        case RiskKind::CVaR:
            return cvar_empirical(samples, spec.alpha);
        case RiskKind::OCE:
            return oce_empirical(samples, spec.beta1, spec.beta2);
        case RiskKind::MeanDeviation:
            return mean_deviation_empirical(samples, spec.b, spec.p_order);
        case RiskKind::MeanSemideviation:
            return mean_semideviation_empirical(samples, spec.b, spec.p_order);
    }
    throw std::logic_error("unknown RiskKind");
}

double risk_exact_discrete(const DiscreteDist& dist, const RiskSpec& spec) {
    dist.validate();
    spec.validate();
    const std::size_t n = dist.size();

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += dist.probs[i] * dist.values[i];

    switch (spec.kind) {
        case RiskKind::Expectation:
            return mean;
        case RiskKind::CVaR: {
            if (spec.alpha == 0.0) return mean;
            const double scale = 1.0 / (1.0 - spec.alpha);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n; ++k) {
                const double eta = dist.values[k];
                double above = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    above += dist.probs[i] * std::max(dist.values[i] - eta, 0.0);
                best = std::min(best, eta + scale * above);
            }
            return best;
        }
        case RiskKind::OCE: {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n; ++k) {
                const double eta = dist.values[k];
                double util = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    util += dist.probs[i] * oce_utility(dist.values[i] - eta, spec.beta1, spec.beta2);
                best = std::min(best, eta + util);
            }
            return best;
        }
        case RiskKind::MeanDeviation: {
            double moment = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                moment += dist.probs[i] * std::pow(std::abs(dist.values[i] - mean), spec.p_order);
            return mean + spec.b * std::pow(moment, 1.0 / spec.p_order);
        }
        case RiskKind::MeanSemideviation: {
            double moment = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                moment += dist.probs[i] * std::pow(std::max(dist.values[i] - mean, 0.0), spec.p_order);
            return mean + spec.b * std::pow(moment, 1.0 / spec.p_order);
        }
    }
    throw std::logic_error("unknown RiskKind");
}

double theta_bound(const RiskSpec& spec, double eps, std::int64_t m, double j_max) {
    spec.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("theta_bound: eps must be positive");
    if (m < 1) throw std::invalid_argument("theta_bound: m must be >= 1");
    if (!(j_max > 0.0)) throw std::invalid_argument("theta_bound: j_max must be positive");

    const double md = static_cast<double>(m);
    double bound = 0.0;
    switch (spec.kind) {
        case RiskKind::MeanDeviation:
        case RiskKind::MeanSemideviation: {
            const double p = spec.p_order;
            const double c = std::pow(1.0 + j_max, p) - std::pow(j_max, p);
            const double x = md * eps * eps / (2.0 * j_max * j_max);
            double ey = 0.0, ez = 0.0;
            if (spec.b > 0.0) {
                const double dy = spec.b * p * (1.0 + c) * std::pow(j_max, p);
                const double dz = spec.b * p * (1.0 + c) * std::pow(j_max, 2.0 * p - 1.0);
                ey = std::exp(-md * eps * eps / (2.0 * dy * dy));
                ez = std::exp(-md * eps * eps / (2.0 * dz * dz));
            }
            bound = 2.0 * (std::exp(-x) + ey + ez);
            break;
        }
        case RiskKind::OCE: {
            const double u_max = spec.beta2 * j_max;
            bound = 2.0 * (1.0 + 4.0 * spec.beta2 / eps) *
                    std::exp(-md * eps * eps / (2.0 * u_max * u_max));
            break;
        }
        case RiskKind::CVaR:
        case RiskKind::Expectation: {
            const double alpha = spec.kind == RiskKind::CVaR ? spec.alpha : 0.0;
            const double scaled_eps = eps * (1.0 - alpha);
            const double denom = (2.0 - alpha) * j_max;
            bound = 2.0 * (1.0 + 4.0 / scaled_eps) *
                    std::exp(-md * scaled_eps * scaled_eps / (2.0 * denom * denom));
            break;
        }
    }
    return std::clamp(bound, 0.0, 1.0);
}

std::int64_t min_samples_for(const RiskSpec& spec, double eps, double delta,
                             double j_max, std::int64_t n_states, std::int64_t n_actions) {
    spec.validate();
    if (!(eps > 0.0)) throw std::invalid_argument("min_samples_for: eps must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("min_samples_for: delta must lie in (0, 1)");
    if (!(j_max > 0.0)) throw std::invalid_argument("min_samples_for: j_max must be positive");
    if (n_states < 1 || n_actions < 1)
        throw std::invalid_argument("min_samples_for: state/action counts must be >= 1");

    const double log_terms =
        std::log(1.0 / delta) + std::log(8.0 * static_cast<double>(n_states * n_actions));
    double threshold = 0.0;
    switch (spec.kind) {
        case RiskKind::CVaR:
        case RiskKind::Expectation: {
            const double alpha = spec.kind == RiskKind::CVaR ? spec.alpha : 0.0;
            const double lead = (2.0 - alpha) * j_max / ((1.0 - alpha) * eps);
            threshold = 32.0 * lead * lead *
                        (log_terms + std::log(1.0 + 16.0 / (eps * (1.0 - alpha))));
            break;
        }
        case RiskKind::OCE: {
            const double lead = spec.beta2 * j_max / eps;
            threshold = 32.0 * lead * lead *
                        (log_terms + std::log(1.0 + 16.0 * spec.beta2 / eps));
            break;
        }
        case RiskKind::MeanDeviation:
        case RiskKind::MeanSemideviation: {
            const double p = spec.p_order;
            const double c = std::pow(1.0 + j_max, p) - std::pow(j_max, p);
            const double a1 = (1.0 + c) * std::pow(j_max, p);
            const double a2 = spec.b * p * (1.0 + c) * std::pow(j_max, 2.0 * p - 1.0);
            const double m_prime = std::min({a1 * a1, a2 * a2, j_max * j_max});
            threshold = 32.0 * m_prime / (eps * eps) * log_terms;
            break;
        }
    }
    if (!(threshold < 9.0e18))
        throw std::overflow_error("min_samples_for: required sample count overflows");
    return static_cast<std::int64_t>(std::floor(threshold)) + 1;
}

}  // namespace riskavi

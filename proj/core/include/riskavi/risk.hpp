#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace riskavi {

enum class RiskKind {
    Expectation,
    MeanDeviation,
    MeanSemideviation,
    OCE,
    CVaR,
};

std::string to_string(RiskKind kind);
RiskKind risk_kind_from_string(const std::string& name);

/// Which one-step coherent risk measure to apply, with its parameters.
struct RiskSpec {
    RiskKind kind = RiskKind::Expectation;
    double alpha = 0.0;    // CVaR confidence level in [0, 1)
    double b = 0.0;        // risk price, mean-(semi)deviation
    double p_order = 1.0;  // deviation order in [1, inf)
    double beta1 = 0.0;    // OCE slope below the certainty level, in [0, 1)
    double beta2 = 2.0;    // OCE slope above the certainty level, > 1

    static RiskSpec expectation();
    static RiskSpec cvar(double alpha);
    static RiskSpec oce(double beta1, double beta2);
    static RiskSpec mean_deviation(double b, double p_order);
    static RiskSpec mean_semideviation(double b, double p_order);

    /// Throws std::invalid_argument on an out-of-range parameter.
    void validate() const;

    std::string describe() const;
};

/// Finite list of sampled outcomes, each expected to lie in [0, J_max].
struct SampleSet {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }

    /// Throws std::invalid_argument if empty or any value is non-finite.
    void validate() const;
};

/// Finite-support distribution, the substrate for exact risk evaluation.
struct DiscreteDist {
    std::vector<double> values;
    std::vector<double> probs;

    static DiscreteDist point_mass(double value);

    std::size_t size() const { return values.size(); }

    /// Atoms must carry strictly positive probabilities summing to 1
    /// within 1e-12; throws std::invalid_argument otherwise.
    void validate() const;
};

// -- Empirical estimators ----------------------------------------------------

/// Empirical CVaR at level alpha: min over eta of
///   eta + (1 / (m (1-alpha))) sum_j (Y_j - eta)_+.
/// The objective is piecewise linear with breakpoints at the sample values,
/// so the minimum is found by enumerating sorted breakpoints.
double cvar_empirical(std::span<const double> samples, double alpha);

/// Empirical coherent OCE: min over eta of eta + mean(u(Y_j - eta)) with
/// u(x) = beta2 (x)_+ - beta1 (-x)_+ and 0 <= beta1 < 1 < beta2.
/// beta1 = 0, beta2 = 1/(1-alpha) recovers CVaR at level alpha.
double oce_empirical(std::span<const double> samples, double beta1, double beta2);

/// Sample mean plus b times the empirical p-th order deviation.
double mean_deviation_empirical(std::span<const double> samples, double b, double p_order);

/// As mean_deviation_empirical but only upside deviations (Y_j - mean)_+.
double mean_semideviation_empirical(std::span<const double> samples, double b, double p_order);

/// Dispatch on spec.kind; Expectation is the sample mean.
double risk_empirical(std::span<const double> samples, const RiskSpec& spec);

// -- Exact evaluation on finite support --------------------------------------

/// Exact value of the risk measure applied to a finite-support distribution.
/// CVaR/OCE use probability-weighted breakpoint enumeration, the deviation
/// measures direct moment computation.
double risk_exact_discrete(const DiscreteDist& dist, const RiskSpec& spec);

// -- Concentration bounds ----------------------------------------------------

/// Upper bound on P(|rho - rho_hat_m| > eps) for the given estimator,
/// clamped into [0, 1].  Expectation uses the CVaR bound at alpha = 0.
double theta_bound(const RiskSpec& spec, double eps, std::int64_t m, double j_max);

/// Smallest integer m strictly exceeding the closed-form sample-size
/// requirement for accuracy eps and failure probability delta, spread over
/// n_states * n_actions estimation points.
std::int64_t min_samples_for(const RiskSpec& spec, double eps, double delta,
                             double j_max, std::int64_t n_states, std::int64_t n_actions);

}  // namespace riskavi

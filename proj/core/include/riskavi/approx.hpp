#pragma once

#include <utility>
#include <vector>

#include "riskavi/mdp.hpp"

namespace riskavi {

/// Uniform partition of [0, s_max] into cells of width <= epsilon with
/// representatives at cell midpoints, so every state is within epsilon of a
/// representative in sup-norm.
struct EpsNet {
    double epsilon = 0.0;
    double s_max = 0.0;
    std::vector<double> representatives;

    std::size_t size() const { return representatives.size(); }
    double cell_width() const { return s_max / static_cast<double>(representatives.size()); }

    /// Index of the cell containing value in [0, s_max].
    std::size_t cell_of(double value) const;

    bool operator==(const EpsNet&) const = default;
};

EpsNet build_eps_net(double s_max, double epsilon);

enum class ValueFnVariant { Polynomial, PiecewiseConstant };

/// A fitted risk-to-go function.  Evaluation output is always clipped into
/// [0, j_max]; the absorbing bad state carries its own scalar value.
class ValueFn {
public:
    /// The zero function on [0, s_max], belonging to every family.
    static ValueFn zero(double s_max, double j_max);

    static ValueFn polynomial(std::vector<double> coeffs, double bad_value,
                              double s_max, double j_max);
    static ValueFn piecewise_constant(EpsNet net, std::vector<double> values,
                                      double bad_value, double j_max);

    /// Clipped evaluation.  Throws std::out_of_range for a non-bad state
    /// outside [0, s_max].
    double eval(const State& s) const;

    ValueFnVariant variant() const { return variant_; }
    double j_max() const { return j_max_; }
    double s_max() const { return s_max_; }
    double bad_value() const { return bad_value_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    const std::vector<double>& cell_values() const { return cell_values_; }
    const EpsNet& net() const { return net_; }

    bool operator==(const ValueFn&) const = default;

private:
    ValueFn() = default;

    ValueFnVariant variant_ = ValueFnVariant::Polynomial;
    double j_max_ = 0.0;
    double s_max_ = 0.0;
    double bad_value_ = 0.0;
    std::vector<double> coeffs_;  // monomial basis over s / s_max
    EpsNet net_;
    std::vector<double> cell_values_;
};

/// Least-squares (p_fit = 2) or IRLS (p_fit != 2) polynomial fit on the
/// monomial basis of the normalized state s / s_max.  Points flagged bad are
/// excluded from the polynomial and averaged into the bad-state scalar.
ValueFn fit_polynomial(const std::vector<std::pair<State, double>>& points,
                       int degree, double p_fit, double s_max, double j_max);

/// One target per net representative; constant on each cell.
ValueFn fit_piecewise_constant(const EpsNet& net, const std::vector<double>& targets,
                               double bad_target, double j_max);

inline double eval_value(const ValueFn& fn, const State& s) { return fn.eval(s); }

}  // namespace riskavi

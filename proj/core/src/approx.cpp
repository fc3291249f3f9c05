#include "riskavi/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskavi {

namespace {

constexpr double kRidge = 1e-10;
constexpr int kIrlsMaxIter = 100;
constexpr double kIrlsWeightFloor = 1e-8;
constexpr double kIrlsTol = 1e-9;

// Solve A x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (a[col][col] == 0.0)
            throw std::runtime_error("singular normal-equations system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double acc = b[row];
        for (std::size_t c = row + 1; c < n; ++c) acc -= a[row][c] * x[c];
        x[row] = acc / a[row][row];
    }
    return x;
}

// Weighted least squares on the monomial basis of normalized states.
std::vector<double> weighted_ols(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::vector<double>& weights, int degree) {
    const std::size_t k = static_cast<std::size_t>(degree) + 1;
    std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    std::vector<double> basis(k);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        basis[0] = 1.0;
        for (std::size_t j = 1; j < k; ++j) basis[j] = basis[j - 1] * xs[i];
        const double w = weights[i];
        for (std::size_t r = 0; r < k; ++r) {
            rhs[r] += w * basis[r] * ys[i];
            for (std::size_t c = r; c < k; ++c) gram[r][c] += w * basis[r] * basis[c];
        }
    }
    for (std::size_t r = 0; r < k; ++r) {
        gram[r][r] += kRidge;
        for (std::size_t c = 0; c < r; ++c) gram[r][c] = gram[c][r];
    }
    return solve_dense(std::move(gram), std::move(rhs));
}

double eval_poly(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * x + coeffs[j];
    return acc;
}

}  // namespace

std::size_t EpsNet::cell_of(double value) const {
    const double w = cell_width();
    const auto n = static_cast<std::ptrdiff_t>(representatives.size());
    auto idx = static_cast<std::ptrdiff_t>(std::floor(value / w));
    idx = std::clamp<std::ptrdiff_t>(idx, 0, n - 1);
    return static_cast<std::size_t>(idx);
}

EpsNet build_eps_net(double s_max, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_eps_net: epsilon must be positive");
    if (!(s_max > 0.0)) throw std::invalid_argument("build_eps_net: s_max must be positive");
    if (epsilon > s_max) epsilon = s_max;
    const auto n = static_cast<std::size_t>(std::ceil(s_max / epsilon - 1e-12));
    EpsNet net;
    net.epsilon = epsilon;
    net.s_max = s_max;
    net.representatives.reserve(n);
    const double w = s_max / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        net.representatives.push_back((static_cast<double>(i) + 0.5) * w);
    return net;
}

ValueFn ValueFn::zero(double s_max, double j_max) {
    return polynomial({0.0}, 0.0, s_max, j_max);
}

ValueFn ValueFn::polynomial(std::vector<double> coeffs, double bad_value,
                            double s_max, double j_max) {
    if (coeffs.empty()) throw std::invalid_argument("ValueFn: empty coefficient vector");
    ValueFn fn;
    fn.variant_ = ValueFnVariant::Polynomial;
    fn.coeffs_ = std::move(coeffs);
    fn.bad_value_ = bad_value;
    fn.s_max_ = s_max;
    fn.j_max_ = j_max;
    return fn;
}

ValueFn ValueFn::piecewise_constant(EpsNet net, std::vector<double> values,
                                    double bad_value, double j_max) {
    if (values.size() != net.size())
        throw std::invalid_argument("ValueFn: one value per net cell required");
    ValueFn fn;
    fn.variant_ = ValueFnVariant::PiecewiseConstant;
    fn.s_max_ = net.s_max;
    fn.net_ = std::move(net);
    fn.cell_values_ = std::move(values);
    fn.bad_value_ = bad_value;
    fn.j_max_ = j_max;
    return fn;
}

double ValueFn::eval(const State& s) const {
    if (s.bad) return std::clamp(bad_value_, 0.0, j_max_);
    if (s.value < 0.0 || s.value > s_max_)
        throw std::out_of_range("ValueFn: state outside [0, s_max]");
    double raw;
    if (variant_ == ValueFnVariant::Polynomial)
        raw = eval_poly(coeffs_, s.value / s_max_);
    else
        raw = cell_values_[net_.cell_of(s.value)];
    return std::clamp(raw, 0.0, j_max_);
}

ValueFn fit_polynomial(const std::vector<std::pair<State, double>>& points,
                       int degree, double p_fit, double s_max, double j_max) {
    if (degree < 0) throw std::invalid_argument("fit_polynomial: degree must be >= 0");
    if (!(p_fit >= 1.0)) throw std::invalid_argument("fit_polynomial: p_fit must be >= 1");

    std::vector<double> xs, ys;
    double bad_sum = 0.0;
    std::size_t bad_count = 0;
    for (const auto& [state, target] : points) {
        if (!std::isfinite(target))
            throw std::invalid_argument("fit_polynomial: non-finite target");
        if (state.bad) {
            bad_sum += target;
            ++bad_count;
        } else {
            xs.push_back(state.value / s_max);
            ys.push_back(target);
        }
    }
    const std::size_t k = static_cast<std::size_t>(degree) + 1;
    if (xs.size() < k)
        throw std::invalid_argument("fit_polynomial: fewer points than coefficients");

    std::vector<double> weights(xs.size(), 1.0);
    std::vector<double> coeffs = weighted_ols(xs, ys, weights, degree);

    if (p_fit != 2.0) {
        // IRLS: weight |r|^(p-2) reproduces the p-norm objective at the
        // fixed point.
        for (int iter = 0; iter < kIrlsMaxIter; ++iter) {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double r = std::max(std::abs(eval_poly(coeffs, xs[i]) - ys[i]),
                                          kIrlsWeightFloor);
                weights[i] = std::pow(r, p_fit - 2.0);
            }
            std::vector<double> next = weighted_ols(xs, ys, weights, degree);
            double change = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                change = std::max(change, std::abs(next[j] - coeffs[j]));
            coeffs = std::move(next);
            if (change < kIrlsTol) break;
        }
    }

    const double bad_value = bad_count > 0 ? bad_sum / static_cast<double>(bad_count) : 0.0;
    return ValueFn::polynomial(std::move(coeffs), bad_value, s_max, j_max);
}

ValueFn fit_piecewise_constant(const EpsNet& net, const std::vector<double>& targets,
                               double bad_target, double j_max) {
    if (targets.size() != net.size())
        throw std::invalid_argument("fit_piecewise_constant: one target per representative");
    for (double t : targets)
        if (!std::isfinite(t))
            throw std::invalid_argument("fit_piecewise_constant: non-finite target");
    return ValueFn::piecewise_constant(net, targets, bad_target, j_max);
}

}  // namespace riskavi

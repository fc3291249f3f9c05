#include "riskavi/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace riskavi {

namespace {

constexpr int kRedrawCap = 100;

void check_action(int action, int n_actions) {
    if (action < 0 || action >= n_actions)
        throw std::invalid_argument("action index out of range");
}

}  // namespace

void MaintParams::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q must lie in (0, 1)");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(c1 > 0.0)) throw std::invalid_argument("C1 must be positive");
    if (!(c2 > 0.0)) throw std::invalid_argument("C2 must be positive");
    if (!(s_max > 0.0)) throw std::invalid_argument("s_max must be positive");
    if (!(f > 0.0)) throw std::invalid_argument("operating-cost slope must be positive");
}

double maint_cost(const State& s, int action, const MaintParams& params) {
    check_action(action, 2);
    if (s.bad) return params.c2;
    if (action == Keep) return params.f * s.value;
    return params.c1;  // repair cost plus f(0) = 0
}

State maint_sample_next(const State& s, int action, const MaintParams& params, Rng& rng) {
    check_action(action, 2);
    if (s.bad) return State::bad_state();

    double candidate;
    if (action == Keep) {
        if (rng.uniform() < params.q) return State::bad_state();
        candidate = s.value + rng.exponential(params.beta);
    } else {
        candidate = rng.exponential(params.beta);
    }

    // Truncation: above s_max the equipment is immediately repaired and a
    // fresh state drawn as if Repair were chosen.
    for (int i = 0; i < kRedrawCap && candidate > params.s_max; ++i)
        candidate = rng.exponential(params.beta);
    return State{std::min(candidate, params.s_max), false};
}

std::vector<State> sample_state_dist(const MaintParams& params, std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_state_dist: n must be >= 1");
    std::vector<State> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < 0.05)
            out.push_back(State::bad_state());
        else
            out.push_back(State{rng.uniform(0.0, params.s_max), false});
    }
    return out;
}

MaintenanceModel::MaintenanceModel(MaintParams params) : params_(params) {
    params_.validate();
}

double MaintenanceModel::cost(const State& s, int action) const {
    return maint_cost(s, action, params_);
}

State MaintenanceModel::sample_next(const State& s, int action, Rng& rng) const {
    return maint_sample_next(s, action, params_, rng);
}

double MaintenanceModel::c_max() const {
    return std::max(params_.c2, std::max(params_.c1, params_.f * params_.s_max));
}

double TabularMdp::c_max() const {
    double m = 0.0;
    for (const auto& row : costs)
        for (double c : row) m = std::max(m, c);
    return m;
}

void TabularMdp::validate() const {
    if (n_states < 1 || n_actions < 1)
        throw std::invalid_argument("TabularMdp: state/action counts must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("TabularMdp: gamma must lie in (0, 1)");
    if (static_cast<int>(costs.size()) != n_states ||
        static_cast<int>(transitions.size()) != n_states)
        throw std::invalid_argument("TabularMdp: table row count mismatch");
    for (int s = 0; s < n_states; ++s) {
        if (static_cast<int>(costs[s].size()) != n_actions ||
            static_cast<int>(transitions[s].size()) != n_actions)
            throw std::invalid_argument("TabularMdp: table column count mismatch");
        for (int a = 0; a < n_actions; ++a) {
            if (!(costs[s][a] >= 0.0) || !std::isfinite(costs[s][a]))
                throw std::invalid_argument("TabularMdp: costs must be finite and nonnegative");
            const DiscreteDist& dist = transitions[s][a];
            dist.validate();
            for (double v : dist.values) {
                const double idx = std::round(v);
                if (std::abs(v - idx) > 1e-9 || idx < 0 || idx >= n_states)
                    throw std::invalid_argument("TabularMdp: transition to invalid state index");
            }
        }
    }
}

TabularMdp tabular_from_spec(TabularMdp spec) {
    spec.validate();
    return spec;
}

TabularSimModel::TabularSimModel(TabularMdp mdp) : mdp_(std::move(mdp)) {
    mdp_.validate();
}

int TabularSimModel::state_index(const State& s) const {
    if (s.bad) throw std::invalid_argument("TabularSimModel: no bad state in tabular models");
    // The upper range boundary belongs to the last state, matching the
    // eps-net cell convention.
    const int idx = static_cast<int>(std::floor(s.value));
    if (idx < 0 || s.value > static_cast<double>(mdp_.n_states))
        throw std::invalid_argument("TabularSimModel: state value out of range");
    return std::min(idx, mdp_.n_states - 1);
}

double TabularSimModel::cost(const State& s, int action) const {
    check_action(action, mdp_.n_actions);
    return mdp_.costs[state_index(s)][action];
}

State TabularSimModel::sample_next(const State& s, int action, Rng& rng) const {
    check_action(action, mdp_.n_actions);
    const DiscreteDist& dist = mdp_.transitions[state_index(s)][action];
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        acc += dist.probs[i];
        if (u < acc) return embed(static_cast<int>(std::round(dist.values[i])));
    }
    return embed(static_cast<int>(std::round(dist.values.back())));
}

}  // namespace riskavi

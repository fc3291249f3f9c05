#include "riskavi/engine.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

namespace riskavi {

namespace {

// Stream tag keeping the state-sampling RNG stream disjoint from the
// per-target simulation streams.
constexpr std::uint64_t kTagStates = 0x737461746573ULL;

void parallel_for(std::size_t count, int threads, const auto& body) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::uint64_t state_stream(std::uint64_t seed, const State& s) {
    return stream_key({seed, std::bit_cast<std::uint64_t>(s.value),
                       static_cast<std::uint64_t>(s.bad)});
}

std::vector<State> sample_iteration_states(const MdpModel& model, const AviConfig& config,
                                           int iteration) {
    Rng rng(stream_key({config.seed, static_cast<std::uint64_t>(iteration), kTagStates}));
    std::vector<State> states;
    states.reserve(static_cast<std::size_t>(config.n));
    const double s_max = model.state_max();
    for (int i = 0; i < config.n; ++i) {
        if (model.has_bad_state() && rng.uniform() < 0.05)
            states.push_back(State::bad_state());
        else
            states.push_back(State{rng.uniform(0.0, s_max), false});
    }
    return states;
}

struct FitInput {
    std::vector<State> states;
    std::vector<double> targets;
};

ValueFn fit_iterate(const MdpModel& model, const AviConfig& config, const FitInput& input,
                    const std::optional<EpsNet>& net) {
    const double j_max = model.j_max();
    if (config.fit.kind == FitSpec::Kind::Polynomial) {
        std::vector<std::pair<State, double>> points;
        points.reserve(input.states.size());
        for (std::size_t i = 0; i < input.states.size(); ++i)
            points.emplace_back(input.states[i], input.targets[i]);
        return fit_polynomial(points, config.fit.degree, config.fit.p_fit,
                              model.state_max(), j_max);
    }
    std::vector<double> cell_targets(input.targets.begin(),
                                     input.targets.begin() + static_cast<std::ptrdiff_t>(net->size()));
    const double bad_target =
        input.states.size() > net->size() ? input.targets[net->size()] : 0.0;
    return fit_piecewise_constant(*net, cell_targets, bad_target, j_max);
}

double residual_rms(const ValueFn& fn, const FitInput& input) {
    if (input.states.empty()) return 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < input.states.size(); ++i) {
        const double r = fn.eval(input.states[i]) - input.targets[i];
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(input.states.size()));
}

ValueFn fitted_iteration(const MdpModel& model, const AviConfig& config, const ValueFn& j_k,
                         int iteration, const Policy* forced_policy, IterationDiag* diag) {
    const auto start = std::chrono::steady_clock::now();

    FitInput input;
    std::optional<EpsNet> net;
    if (config.fit.kind == FitSpec::Kind::Polynomial) {
        input.states = sample_iteration_states(model, config, iteration);
    } else {
        net = build_eps_net(model.state_max(), config.fit.epsilon);
        for (double rep : net->representatives) input.states.push_back(State{rep, false});
        if (model.has_bad_state()) input.states.push_back(State::bad_state());
    }

    input.targets.assign(input.states.size(), 0.0);
    parallel_for(input.states.size(), config.threads, [&](std::size_t i) {
        const std::uint64_t seed = stream_key(
            {config.seed, static_cast<std::uint64_t>(iteration), static_cast<std::uint64_t>(i)});
        const State& s = input.states[i];
        if (forced_policy != nullptr) {
            const int a = forced_policy->action(model, s);
            input.targets[i] = action_value_empirical(model, config.risk, j_k, s, a,
                                                      config.m, seed);
        } else {
            input.targets[i] = bellman_target(model, config.risk, j_k, s, config.m, seed);
        }
    });

    ValueFn next = fit_iterate(model, config, input, net);
    if (diag != nullptr) {
        diag->fit_residual_rms = residual_rms(next, input);
        diag->wall_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    }
    return next;
}

DiscreteDist continuation_dist(const TabularMdp& mdp, const std::vector<double>& j,
                               int s, int a) {
    const DiscreteDist& tr = mdp.transitions[s][a];
    DiscreteDist dist;
    dist.probs = tr.probs;
    dist.values.reserve(tr.size());
    for (double v : tr.values)
        dist.values.push_back(j[static_cast<std::size_t>(std::llround(v))]);
    return dist;
}

void check_value_vector(const TabularMdp& mdp, const std::vector<double>& j) {
    if (j.size() != static_cast<std::size_t>(mdp.n_states))
        throw std::invalid_argument("value vector length must equal n_states");
}

}  // namespace

void FitSpec::validate() const {
    if (kind == Kind::Polynomial) {
        if (degree < 0) throw std::invalid_argument("FitSpec: degree must be >= 0");
        if (!(p_fit >= 1.0)) throw std::invalid_argument("FitSpec: p_fit must be >= 1");
    } else {
        if (!(epsilon > 0.0)) throw std::invalid_argument("FitSpec: epsilon must be positive");
    }
}

void AviConfig::validate() const {
    risk.validate();
    fit.validate();
    if (n < 1) throw std::invalid_argument("AviConfig: n must be >= 1");
    if (m < 1) throw std::invalid_argument("AviConfig: m must be >= 1");
    if (iterations < 0) throw std::invalid_argument("AviConfig: iterations must be >= 0");
    if (threads < 1) throw std::invalid_argument("AviConfig: threads must be >= 1");
}

Policy Policy::greedy(ValueFn value_fn, RiskSpec risk, int m_eval, std::uint64_t seed) {
    if (m_eval < 1) throw std::invalid_argument("Policy::greedy: m_eval must be >= 1");
    Policy p;
    p.kind_ = Kind::Greedy;
    p.value_fn_ = std::move(value_fn);
    p.risk_ = risk;
    p.m_eval_ = m_eval;
    p.seed_ = seed;
    return p;
}

Policy Policy::threshold(double boundary, int below_action, int above_action) {
    Policy p;
    p.kind_ = Kind::Threshold;
    p.boundary_ = boundary;
    p.below_action_ = below_action;
    p.above_action_ = above_action;
    return p;
}

Policy Policy::tabular(std::vector<int> actions) {
    if (actions.empty()) throw std::invalid_argument("Policy::tabular: empty action table");
    Policy p;
    p.kind_ = Kind::Tabular;
    p.actions_ = std::move(actions);
    return p;
}

int Policy::action(const MdpModel& model, const State& s) const {
    switch (kind_) {
        case Kind::Greedy:
            return greedy_action(model, risk_, *value_fn_, s, m_eval_, state_stream(seed_, s));
        case Kind::Threshold:
            if (s.bad) return below_action_;
            return s.value <= boundary_ ? below_action_ : above_action_;
        case Kind::Tabular: {
            const auto idx = static_cast<std::size_t>(std::floor(s.value));
            if (idx >= actions_.size())
                throw std::invalid_argument("Policy::tabular: state outside action table");
            return actions_[idx];
        }
    }
    throw std::logic_error("unknown policy kind");
}

double action_value_empirical(const MdpModel& model, const RiskSpec& risk, const ValueFn& j,
                              const State& s, int action, int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("action_value_empirical: m must be >= 1");
    Rng rng(stream_key({seed, static_cast<std::uint64_t>(action)}));
    std::vector<double> continuation(static_cast<std::size_t>(m));
    for (int jdx = 0; jdx < m; ++jdx)
        continuation[static_cast<std::size_t>(jdx)] = j.eval(model.sample_next(s, action, rng));
    return model.cost(s, action) + model.gamma() * risk_empirical(continuation, risk);
}

double bellman_target(const MdpModel& model, const RiskSpec& risk, const ValueFn& j,
                      const State& s, int m, std::uint64_t seed) {
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < model.action_count(); ++a)
        best = std::min(best, action_value_empirical(model, risk, j, s, a, m, seed));
    return best;
}

int greedy_action(const MdpModel& model, const RiskSpec& risk, const ValueFn& j,
                  const State& s, int m_eval, std::uint64_t seed) {
    double best = std::numeric_limits<double>::infinity();
    int best_action = 0;
    for (int a = 0; a < model.action_count(); ++a) {
        const double value = action_value_empirical(model, risk, j, s, a, m_eval, seed);
        if (value < best) {
            best = value;
            best_action = a;
        }
    }
    return best_action;
}

ValueFn avi_iterate(const MdpModel& model, const AviConfig& config, const ValueFn& j_k,
                    int iteration) {
    config.validate();
    return fitted_iteration(model, config, j_k, iteration, nullptr, nullptr);
}

AviRun run_avi(const MdpModel& model, const AviConfig& config) {
    config.validate();
    AviRun run;
    run.iterates.push_back(ValueFn::zero(model.state_max(), model.j_max()));
    run.diagnostics.reserve(static_cast<std::size_t>(config.iterations));
    for (int k = 0; k < config.iterations; ++k) {
        IterationDiag diag;
        run.iterates.push_back(
            fitted_iteration(model, config, run.iterates.back(), k, nullptr, &diag));
        run.diagnostics.push_back(diag);
    }
    return run;
}

std::optional<double> decision_boundary(const MdpModel& model, const RiskSpec& risk,
                                        const ValueFn& j, double grid_step, int m_eval,
                                        std::uint64_t seed) {
    if (!(grid_step > 0.0))
        throw std::invalid_argument("decision_boundary: grid_step must be positive");
    std::optional<double> boundary;
    const double s_max = model.state_max();
    for (std::size_t i = 0;; ++i) {
        const double s = grid_step * static_cast<double>(i);
        if (s > s_max + 1e-12) break;
        const State state{std::min(s, s_max), false};
        if (greedy_action(model, risk, j, state, m_eval, state_stream(seed, state)) == 0)
            boundary = state.value;
    }
    return boundary;
}

ValueFn evaluate_policy_risk(const MdpModel& model, const RiskSpec& risk,
                             const Policy& policy, const AviConfig& config) {
    AviConfig cfg = config;
    cfg.risk = risk;
    cfg.validate();
    ValueFn j = ValueFn::zero(model.state_max(), model.j_max());
    for (int k = 0; k < cfg.iterations; ++k)
        j = fitted_iteration(model, cfg, j, k, &policy, nullptr);
    return j;
}

int default_horizon(const MdpModel& model, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("default_horizon: tol must be positive");
    const double h = std::log(tol / model.j_max()) / std::log(model.gamma());
    return std::max(1, static_cast<int>(std::ceil(h)));
}

RolloutResult rollout_expected_cost(const MdpModel& model, const Policy& policy,
                                    const State& s0, int n_runs, int horizon,
                                    std::uint64_t seed) {
    if (n_runs < 1) throw std::invalid_argument("rollout_expected_cost: n_runs must be >= 1");
    if (horizon < 1) throw std::invalid_argument("rollout_expected_cost: horizon must be >= 1");
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < n_runs; ++r) {
        Rng rng(stream_key({seed, static_cast<std::uint64_t>(r)}));
        State s = s0;
        double discount = 1.0;
        double total = 0.0;
        for (int t = 0; t < horizon; ++t) {
            const int a = policy.action(model, s);
            total += discount * model.cost(s, a);
            s = model.sample_next(s, a, rng);
            discount *= model.gamma();
        }
        sum += total;
        sum_sq += total * total;
    }
    const double n = static_cast<double>(n_runs);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / std::max(1.0, n - 1.0));
    return RolloutResult{mean, std::sqrt(var / n)};
}

std::vector<double> exact_bellman(const TabularMdp& mdp, const RiskSpec& risk,
                                  const std::vector<double>& j) {
    check_value_vector(mdp, j);
    std::vector<double> out(static_cast<std::size_t>(mdp.n_states));
    for (int s = 0; s < mdp.n_states; ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double value = mdp.costs[s][a] +
                                 mdp.gamma * risk_exact_discrete(continuation_dist(mdp, j, s, a), risk);
            best = std::min(best, value);
        }
        out[static_cast<std::size_t>(s)] = best;
    }
    return out;
}

std::vector<double> exact_bellman_fixed(const TabularMdp& mdp, const RiskSpec& risk,
                                        const std::vector<int>& policy,
                                        const std::vector<double>& j) {
    check_value_vector(mdp, j);
    if (policy.size() != static_cast<std::size_t>(mdp.n_states))
        throw std::invalid_argument("policy length must equal n_states");
    std::vector<double> out(static_cast<std::size_t>(mdp.n_states));
    for (int s = 0; s < mdp.n_states; ++s) {
        const int a = policy[static_cast<std::size_t>(s)];
        if (a < 0 || a >= mdp.n_actions)
            throw std::invalid_argument("policy action out of range");
        out[static_cast<std::size_t>(s)] =
            mdp.costs[s][a] + mdp.gamma * risk_exact_discrete(continuation_dist(mdp, j, s, a), risk);
    }
    return out;
}

namespace {

std::vector<double> iterate_to_fixpoint(const TabularMdp& mdp, double tol,
                                        const auto& apply) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const double stop = tol * (1.0 - mdp.gamma) / (2.0 * mdp.gamma);
    std::vector<double> j(static_cast<std::size_t>(mdp.n_states), 0.0);
    for (int iter = 0; iter < 1000000; ++iter) {
        std::vector<double> next = apply(j);
        double diff = 0.0;
        for (std::size_t i = 0; i < j.size(); ++i)
            diff = std::max(diff, std::abs(next[i] - j[i]));
        j = std::move(next);
        if (diff <= stop) return j;
    }
    throw std::runtime_error("value iteration failed to converge");
}

}  // namespace

ExactSolution exact_value_iteration(const TabularMdp& mdp, const RiskSpec& risk, double tol) {
    mdp.validate();
    ExactSolution sol;
    sol.values = iterate_to_fixpoint(
        mdp, tol, [&](const std::vector<double>& j) { return exact_bellman(mdp, risk, j); });
    sol.policy.resize(static_cast<std::size_t>(mdp.n_states));
    for (int s = 0; s < mdp.n_states; ++s) {
        double best = std::numeric_limits<double>::infinity();
        int best_action = 0;
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double value =
                mdp.costs[s][a] +
                mdp.gamma * risk_exact_discrete(continuation_dist(mdp, sol.values, s, a), risk);
            if (value < best) {
                best = value;
                best_action = a;
            }
        }
        sol.policy[static_cast<std::size_t>(s)] = best_action;
    }
    return sol;
}

std::vector<double> exact_policy_value(const TabularMdp& mdp, const RiskSpec& risk,
                                       const std::vector<int>& policy, double tol) {
    mdp.validate();
    return iterate_to_fixpoint(mdp, tol, [&](const std::vector<double>& j) {
        return exact_bellman_fixed(mdp, risk, policy, j);
    });
}

}  // namespace riskavi

#pragma once

#include <cstdint>
#include <vector>

#include "riskavi/risk.hpp"
#include "riskavi/rng.hpp"

namespace riskavi {

/// A point in the one-dimensional state space, or the absorbing bad state.
/// The bad state is a tagged flag rather than a numeric sentinel because its
/// dynamics and costs differ from the continuous state at the range boundary.
struct State {
    double value = 0.0;
    bool bad = false;

    static State bad_state() { return State{0.0, true}; }
};

/// Behavioral MDP interface: finite actions, bounded costs, a transition
/// sampler, and a discount in (0, 1).  Models are immutable after
/// construction; sampling takes an explicit rng, so concurrent use with
/// independent streams is safe.
class MdpModel {
public:
    virtual ~MdpModel() = default;

    virtual int action_count() const = 0;
    virtual double cost(const State& s, int action) const = 0;
    virtual State sample_next(const State& s, int action, Rng& rng) const = 0;
    virtual double gamma() const = 0;
    virtual double c_max() const = 0;
    /// Upper bound of the continuous state range [0, state_max()].
    virtual double state_max() const = 0;
    /// Whether the model has an absorbing bad state outside the range.
    virtual bool has_bad_state() const { return false; }

    double j_max() const { return c_max() / (1.0 - gamma()); }
};

// -- Maintenance benchmark ----------------------------------------------------

enum MaintAction : int { Keep = 0, Repair = 1 };

struct MaintParams {
    double gamma = 0.6;   // discount
    double beta = 0.5;    // exponential rate of utilization increments
    double q = 0.2;       // breakdown probability under Keep
    double c1 = 30.0;     // repair cost
    double c2 = 120.0;    // bad-state penalty
    double s_max = 30.0;  // state-space truncation bound
    double f = 4.0;       // linear operating-cost slope

    void validate() const;
};

double maint_cost(const State& s, int action, const MaintParams& params);
State maint_sample_next(const State& s, int action, const MaintParams& params, Rng& rng);

/// Mixture sampling distribution from the benchmark: uniform on [0, s_max]
/// with probability 0.95, the bad state with probability 0.05.
std::vector<State> sample_state_dist(const MaintParams& params, std::size_t n, Rng& rng);

class MaintenanceModel final : public MdpModel {
public:
    explicit MaintenanceModel(MaintParams params);

    int action_count() const override { return 2; }
    double cost(const State& s, int action) const override;
    State sample_next(const State& s, int action, Rng& rng) const override;
    double gamma() const override { return params_.gamma; }
    double c_max() const override;
    double state_max() const override { return params_.s_max; }
    bool has_bad_state() const override { return true; }

    const MaintParams& params() const { return params_; }

private:
    MaintParams params_;
};

// -- Tabular MDPs (oracle substrate) ------------------------------------------

struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    double gamma = 0.0;
    std::vector<std::vector<double>> costs;                 // [state][action]
    std::vector<std::vector<DiscreteDist>> transitions;     // [state][action]

    double c_max() const;
    double j_max() const { return c_max() / (1.0 - gamma); }

    void validate() const;
};

/// Validates and returns the instance; throws std::invalid_argument on a
/// malformed cost matrix or non-normalized transition distribution.
TabularMdp tabular_from_spec(TabularMdp spec);

/// Adapter exposing a TabularMdp through the simulation interface.  State i
/// is embedded at value i + 0.5 on [0, n_states], so a unit-width
/// piecewise-constant net has one cell per tabular state.
class TabularSimModel final : public MdpModel {
public:
    explicit TabularSimModel(TabularMdp mdp);

    int action_count() const override { return mdp_.n_actions; }
    double cost(const State& s, int action) const override;
    State sample_next(const State& s, int action, Rng& rng) const override;
    double gamma() const override { return mdp_.gamma; }
    double c_max() const override { return mdp_.c_max(); }
    double state_max() const override { return static_cast<double>(mdp_.n_states); }

    const TabularMdp& tabular() const { return mdp_; }

    int state_index(const State& s) const;
    static State embed(int state_index) {
        return State{static_cast<double>(state_index) + 0.5, false};
    }

private:
    TabularMdp mdp_;
};

}  // namespace riskavi

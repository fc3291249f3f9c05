#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riskavi/approx.hpp"
#include "riskavi/mdp.hpp"
#include "riskavi/risk.hpp"

namespace riskavi {

/// Function-family choice for the fitting step.
struct FitSpec {
    enum class Kind { Polynomial, PiecewiseConstant };
    Kind kind = Kind::Polynomial;
    int degree = 4;      // polynomial only
    double p_fit = 2.0;  // polynomial only
    double epsilon = 1.0;  // piecewise-constant only

    void validate() const;
};

/// Sampling distribution for the states visited each iteration
/// (polynomial mode only; the piecewise-constant net is deterministic).
/// UniformMix: uniform on [0, s_max] w.p. 0.95, the bad state w.p. 0.05.
enum class StateDist { UniformMix };

struct AviConfig {
    RiskSpec risk;
    int n = 100;        // states per iteration
    int m = 100;        // transition samples per (state, action)
    int iterations = 30;
    FitSpec fit;
    StateDist state_dist = StateDist::UniformMix;
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const;
};

struct IterationDiag {
    double fit_residual_rms = 0.0;
    double wall_ms = 0.0;
};

struct AviRun {
    std::vector<ValueFn> iterates;  // J_0 ... J_K
    std::vector<IterationDiag> diagnostics;
};

struct RolloutResult {
    double mean = 0.0;
    double std_error = 0.0;
};

/// A state -> action map.  Greedy selection is deterministic given
/// (value function, m_eval, seed).
class Policy {
public:
    static Policy greedy(ValueFn value_fn, RiskSpec risk, int m_eval, std::uint64_t seed);
    /// below_action for s.value <= boundary, above_action otherwise.
    static Policy threshold(double boundary, int below_action, int above_action);
    /// One action per tabular state index (states embedded at i + 0.5).
    static Policy tabular(std::vector<int> actions);

    int action(const MdpModel& model, const State& s) const;

private:
    Policy() = default;

    enum class Kind { Greedy, Threshold, Tabular } kind_ = Kind::Threshold;
    std::optional<ValueFn> value_fn_;
    RiskSpec risk_;
    int m_eval_ = 1;
    std::uint64_t seed_ = 0;
    double boundary_ = 0.0;
    int below_action_ = 0;
    int above_action_ = 1;
    std::vector<int> actions_;
};

// -- Simulation-based operators ------------------------------------------------

/// Empirical one-step lookahead value of a single action:
/// cost(s, a) + gamma * rho_hat({J(Y_j)}_{j=1..m}) with a stream derived
/// from (seed, a).
double action_value_empirical(const MdpModel& model, const RiskSpec& risk, const ValueFn& j,
                              const State& s, int action, int m, std::uint64_t seed);

/// Minimum over actions of the empirical lookahead; ties break toward the
/// smallest action index.
double bellman_target(const MdpModel& model, const RiskSpec& risk, const ValueFn& j,
                      const State& s, int m, std::uint64_t seed);

int greedy_action(const MdpModel& model, const RiskSpec& risk, const ValueFn& j,
                  const State& s, int m_eval, std::uint64_t seed);

/// One fitted application of the empirical Bellman operator.
ValueFn avi_iterate(const MdpModel& model, const AviConfig& config, const ValueFn& j_k,
                    int iteration);

/// Full Algorithm: K fitted iterations starting from J_0 = 0.
AviRun run_avi(const MdpModel& model, const AviConfig& config);

/// Largest grid point s in [0, s_max] whose greedy action is action 0
/// (Keep, for the maintenance model); nullopt when no grid point keeps.
std::optional<double> decision_boundary(const MdpModel& model, const RiskSpec& risk,
                                        const ValueFn& j, double grid_step, int m_eval,
                                        std::uint64_t seed);

/// run_avi with the action forced to policy(s): approximates the recursive
/// risk value J^pi of the fixed policy.
ValueFn evaluate_policy_risk(const MdpModel& model, const RiskSpec& risk,
                             const Policy& policy, const AviConfig& config);

/// Truncation horizon with gamma^H * J_max <= tol.
int default_horizon(const MdpModel& model, double tol = 1e-3);

/// Monte-Carlo mean of the truncated discounted cost under the policy.
RolloutResult rollout_expected_cost(const MdpModel& model, const Policy& policy,
                                    const State& s0, int n_runs, int horizon,
                                    std::uint64_t seed);

// -- Exact tabular oracle -------------------------------------------------------

/// One exact application of the risk-aware Bellman operator.
std::vector<double> exact_bellman(const TabularMdp& mdp, const RiskSpec& risk,
                                  const std::vector<double>& j);

/// Exact fixed-policy operator T^pi.
std::vector<double> exact_bellman_fixed(const TabularMdp& mdp, const RiskSpec& risk,
                                        const std::vector<int>& policy,
                                        const std::vector<double>& j);

struct ExactSolution {
    std::vector<double> values;
    std::vector<int> policy;
};

/// Value iteration from 0 with the contraction stopping rule
/// sup-norm change <= tol (1 - gamma) / (2 gamma).
ExactSolution exact_value_iteration(const TabularMdp& mdp, const RiskSpec& risk, double tol);

/// Fixed point of T^pi for a given tabular policy.
std::vector<double> exact_policy_value(const TabularMdp& mdp, const RiskSpec& risk,
                                       const std::vector<int>& policy, double tol);

}  // namespace riskavi

// Command-line front end: solves, policy evaluations, the maintenance
// benchmark sweep, and the sample-complexity bound calculators.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "riskavi/bounds.hpp"
#include "riskavi/engine.hpp"
#include "riskavi/io.hpp"

namespace fs = std::filesystem;
using riskavi::json;

namespace {

// ---------------------------------------------------------------------------
// Logging (RISK_AVI_LOG in {error, info, debug}; default info).

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("RISK_AVI_LOG");
        if (env == nullptr) return LogLevel::Info;
        const std::string v(env);
        if (v == "error") return LogLevel::Error;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Info;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) std::cerr << "[debug] " << msg << "\n";
}

// ---------------------------------------------------------------------------
// I/O helpers.  IoError maps to exit code 2; everything else that derives
// from std::exception maps to exit code 1 (validation).

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return json::parse(buf.str());  // json::exception -> validation failure
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("write failure on " + path.string());
}

void write_json_file(const fs::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

// ---------------------------------------------------------------------------
// Config parsing.

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads_override;
};

fs::path resolve_out_dir(const CommonArgs& args, const json& config) {
    fs::path dir = !args.out_dir.empty() ? fs::path(args.out_dir)
                                         : fs::path(config.value("out_dir", std::string(".")));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    return dir;
}

riskavi::MaintParams maint_params_from_json(const json& j) {
    riskavi::MaintParams p;
    p.gamma = j.value("gamma", p.gamma);
    p.beta = j.value("beta", p.beta);
    p.q = j.value("q", p.q);
    p.c1 = j.value("c1", p.c1);
    p.c2 = j.value("c2", p.c2);
    p.s_max = j.value("s_max", p.s_max);
    p.f = j.value("f", p.f);
    p.validate();
    return p;
}

std::unique_ptr<riskavi::MdpModel> model_from_json(const json& config, const fs::path& base) {
    const json& spec = config.at("model");
    const auto type = spec.at("type").get<std::string>();
    if (type == "maintenance")
        return std::make_unique<riskavi::MaintenanceModel>(maint_params_from_json(spec));
    if (type == "tabular") {
        json mdp_json;
        if (spec.contains("path"))
            mdp_json = load_json(base / spec.at("path").get<std::string>());
        else
            mdp_json = spec.at("mdp");
        return std::make_unique<riskavi::TabularSimModel>(riskavi::tabular_from_json(mdp_json));
    }
    throw std::invalid_argument("model.type must be 'maintenance' or 'tabular', got '" +
                                type + "'");
}

riskavi::FitSpec fit_from_json(const json& j) {
    riskavi::FitSpec fit;
    const auto kind = j.value("kind", std::string("polynomial"));
    if (kind == "polynomial")
        fit.kind = riskavi::FitSpec::Kind::Polynomial;
    else if (kind == "piecewise-constant")
        fit.kind = riskavi::FitSpec::Kind::PiecewiseConstant;
    else
        throw std::invalid_argument("fit.kind must be 'polynomial' or 'piecewise-constant'");
    fit.degree = j.value("degree", fit.degree);
    fit.p_fit = j.value("p_fit", fit.p_fit);
    fit.epsilon = j.value("epsilon", fit.epsilon);
    fit.validate();
    return fit;
}

riskavi::AviConfig avi_from_json(const json& config, const CommonArgs& args) {
    riskavi::AviConfig avi;
    avi.risk = riskavi::risk_spec_from_json(config.at("risk"));
    const json a = config.value("avi", json::object());
    avi.n = a.value("n", avi.n);
    avi.m = a.value("m", avi.m);
    avi.iterations = a.value("iterations", avi.iterations);
    if (a.contains("fit")) avi.fit = fit_from_json(a.at("fit"));
    avi.seed = config.value("seed", std::uint64_t{0});
    if (args.seed_override) avi.seed = *args.seed_override;
    avi.threads = a.value("threads", avi.threads);
    if (args.threads_override) avi.threads = *args.threads_override;
    avi.validate();
    return avi;
}

riskavi::Policy policy_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "threshold")
        return riskavi::Policy::threshold(j.at("boundary").get<double>(),
                                          j.value("below_action", 0), j.value("above_action", 1));
    if (kind == "always-repair")
        return riskavi::Policy::threshold(-1.0, riskavi::Repair, riskavi::Repair);
    if (kind == "tabular")
        return riskavi::Policy::tabular(j.at("actions").get<std::vector<int>>());
    throw std::invalid_argument("policy.kind must be 'threshold', 'always-repair' or 'tabular'");
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const CommonArgs& args) {
    const json config = load_json(args.config_path);
    const fs::path out = resolve_out_dir(args, config);
    const auto model = model_from_json(config, fs::path(args.config_path).parent_path());
    const riskavi::AviConfig avi = avi_from_json(config, args);

    log_info("solve: " + avi.risk.describe() + ", K=" + std::to_string(avi.iterations));
    const riskavi::AviRun run = riskavi::run_avi(*model, avi);

    write_json_file(out / "run.json", riskavi::to_json(run));

    // Probe the iterates at five evenly spaced states plus the bad state.
    const double s_max = model->state_max();
    std::vector<riskavi::State> probes;
    for (int i = 0; i <= 4; ++i)
        probes.push_back(riskavi::State{s_max * static_cast<double>(i) / 4.0, false});

    std::string csv = "k,fit_residual_rms,wall_ms,v_0,v_quarter,v_half,v_three_quarter,v_max,"
                      "v_bad\n";
    for (std::size_t k = 0; k < run.iterates.size(); ++k) {
        std::vector<std::string> cells{std::to_string(k)};
        if (k == 0) {
            cells.push_back(riskavi::format_double(0.0));
            cells.push_back(riskavi::format_double(0.0));
        } else {
            cells.push_back(riskavi::format_double(run.diagnostics[k - 1].fit_residual_rms));
            cells.push_back(riskavi::format_double(run.diagnostics[k - 1].wall_ms));
        }
        for (const riskavi::State& s : probes)
            cells.push_back(riskavi::format_double(run.iterates[k].eval(s)));
        cells.push_back(riskavi::format_double(run.iterates[k].eval(riskavi::State::bad_state())));
        csv += csv_row(cells);
    }
    write_text(out / "iterates.csv", csv);
    log_info("solve: wrote run.json and iterates.csv to " + out.string());
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const CommonArgs& args) {
    const json config = load_json(args.config_path);
    const fs::path out = resolve_out_dir(args, config);
    const auto model = model_from_json(config, fs::path(args.config_path).parent_path());
    const riskavi::AviConfig avi = avi_from_json(config, args);
    const riskavi::Policy policy = policy_from_json(config.at("policy"));

    const json ev = config.value("eval", json::object());
    const int n_runs = ev.value("n_runs", 5000);
    const int horizon = ev.value("horizon", riskavi::default_horizon(*model));
    const double s0 = ev.value("s0", 0.0);

    const riskavi::State start{s0, false};
    const riskavi::RolloutResult rollout =
        riskavi::rollout_expected_cost(*model, policy, start, n_runs, horizon,
                                       riskavi::stream_key({avi.seed, 1}));
    const riskavi::ValueFn value =
        riskavi::evaluate_policy_risk(*model, avi.risk, policy, avi);

    json result{{"rollout_mean", rollout.mean},
                {"rollout_std_error", rollout.std_error},
                {"horizon", horizon},
                {"risk_value_at_s0", value.eval(start)},
                {"risk_value_fn", riskavi::to_json(value)}};
    write_json_file(out / "evaluate.json", result);
    log_info("evaluate: wrote evaluate.json to " + out.string());
    return 0;
}

// ---------------------------------------------------------------------------
// bench-maintenance

struct SweepRow {
    double alpha = 0.0;  // 0 encodes the risk-neutral policy
    std::optional<double> boundary;
    riskavi::RolloutResult rollout;
    double policy_risk_value = 0.0;   // recursive value of this row's policy
    double neutral_risk_value = 0.0;  // same risk measure, risk-neutral policy
};

int cmd_bench_maintenance(const CommonArgs& args) {
    const json config = load_json(args.config_path);
    const fs::path out = resolve_out_dir(args, config);

    json model_spec = config.value("model", json{{"type", "maintenance"}});
    if (model_spec.value("type", std::string("maintenance")) != "maintenance")
        throw std::invalid_argument("bench-maintenance requires a maintenance model");
    const riskavi::MaintenanceModel model(maint_params_from_json(model_spec));

    riskavi::AviConfig base;
    base.risk = riskavi::RiskSpec::expectation();
    const json a = config.value("avi", json::object());
    base.n = a.value("n", 100);
    base.m = a.value("m", 100);
    base.iterations = a.value("iterations", 30);
    base.fit = a.contains("fit") ? fit_from_json(a.at("fit")) : riskavi::FitSpec{};
    base.seed = config.value("seed", std::uint64_t{0});
    if (args.seed_override) base.seed = *args.seed_override;
    base.threads = a.value("threads", 1);
    if (args.threads_override) base.threads = *args.threads_override;
    base.validate();

    const json ev = config.value("eval", json::object());
    const std::vector<double> alphas =
        ev.value("alphas", std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
    const int n_runs = ev.value("n_runs", 5000);
    const double grid_step = ev.value("grid_step", 0.1);
    const int m_eval = ev.value("m_eval", 10000);
    const int horizon = ev.value("horizon", riskavi::default_horizon(model));
    const riskavi::State start{0.0, false};

    const auto policy_for = [](const std::optional<double>& boundary) {
        if (boundary)
            return riskavi::Policy::threshold(*boundary, riskavi::Keep, riskavi::Repair);
        return riskavi::Policy::threshold(-1.0, riskavi::Repair, riskavi::Repair);
    };

    const auto solve_one = [&](const riskavi::RiskSpec& risk, std::uint64_t tag) {
        riskavi::AviConfig cfg = base;
        cfg.risk = risk;
        cfg.seed = riskavi::stream_key({base.seed, tag});
        const riskavi::AviRun run = riskavi::run_avi(model, cfg);
        const std::optional<double> boundary = riskavi::decision_boundary(
            model, risk, run.iterates.back(), grid_step, m_eval,
            riskavi::stream_key({cfg.seed, 1}));
        return std::pair(cfg, boundary);
    };

    log_info("bench-maintenance: risk-neutral solve");
    const auto [neutral_cfg, neutral_boundary] =
        solve_one(riskavi::RiskSpec::expectation(), 0);
    const riskavi::Policy neutral_policy = policy_for(neutral_boundary);

    std::vector<SweepRow> rows;
    {
        SweepRow row;
        row.alpha = 0.0;
        row.boundary = neutral_boundary;
        row.rollout = riskavi::rollout_expected_cost(model, neutral_policy, start, n_runs,
                                                     horizon, riskavi::stream_key({base.seed, 2}));
        riskavi::AviConfig eval_cfg = neutral_cfg;
        eval_cfg.seed = riskavi::stream_key({base.seed, 3});
        const riskavi::ValueFn v = riskavi::evaluate_policy_risk(
            model, riskavi::RiskSpec::expectation(), neutral_policy, eval_cfg);
        row.policy_risk_value = v.eval(start);
        row.neutral_risk_value = row.policy_risk_value;
        rows.push_back(row);
    }

    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double alpha = alphas[i];
        const riskavi::RiskSpec risk = riskavi::RiskSpec::cvar(alpha);
        log_info("bench-maintenance: " + risk.describe());
        const auto [cfg, boundary] = solve_one(risk, 16 + i);
        const riskavi::Policy policy = policy_for(boundary);

        SweepRow row;
        row.alpha = alpha;
        row.boundary = boundary;
        row.rollout = riskavi::rollout_expected_cost(
            model, policy, start, n_runs, horizon, riskavi::stream_key({cfg.seed, 2}));

        riskavi::AviConfig eval_cfg = cfg;
        eval_cfg.seed = riskavi::stream_key({cfg.seed, 3});
        row.policy_risk_value =
            riskavi::evaluate_policy_risk(model, risk, policy, eval_cfg).eval(start);
        eval_cfg.seed = riskavi::stream_key({cfg.seed, 4});
        row.neutral_risk_value =
            riskavi::evaluate_policy_risk(model, risk, neutral_policy, eval_cfg).eval(start);
        rows.push_back(row);
    }

    std::string table2 = "alpha,boundary\n";
    std::string fig2 = "alpha,mean_cost,std_error\n";
    std::string fig3 = "alpha,policy_risk_value,neutral_policy_risk_value\n";
    for (const SweepRow& row : rows) {
        const std::string alpha = riskavi::format_double(row.alpha);
        table2 += csv_row({alpha, row.boundary ? riskavi::format_double(*row.boundary)
                                               : std::string("R")});
        fig2 += csv_row({alpha, riskavi::format_double(row.rollout.mean),
                         riskavi::format_double(row.rollout.std_error)});
        fig3 += csv_row({alpha, riskavi::format_double(row.policy_risk_value),
                         riskavi::format_double(row.neutral_risk_value)});
    }
    write_text(out / "table2.csv", table2);
    write_text(out / "fig2.csv", fig2);
    write_text(out / "fig3.csv", fig3);
    log_info("bench-maintenance: wrote table2.csv, fig2.csv, fig3.csv to " + out.string());
    return 0;
}

// ---------------------------------------------------------------------------
// bounds

json run_bound_plan(const json& plan) {
    const auto kind = plan.at("plan").get<std::string>();
    json result{{"plan", kind}};
    if (kind == "supnorm") {
        const riskavi::BoundInputs in = riskavi::bound_inputs_from_json(plan.at("inputs"));
        const riskavi::BoundReport rep =
            riskavi::supnorm_plan(in, plan.at("iterations").get<std::int64_t>());
        result["report"] = riskavi::to_json(rep);
        std::cout << "supnorm plan: K=" << rep.iterations << " n=" << rep.n << " m=" << rep.m
                  << " eps_net=" << rep.epsilon_net << "\n  " << rep.guarantee << "\n";
    } else if (kind == "pnorm") {
        const riskavi::BoundInputs in = riskavi::bound_inputs_from_json(plan.at("inputs"));
        const riskavi::BoundReport rep = riskavi::pnorm_plan(in);
        result["report"] = riskavi::to_json(rep);
        std::cout << "pnorm plan: K=" << rep.iterations << " n=" << rep.n << " m=" << rep.m
                  << "\n  " << rep.guarantee << "\n";
    } else if (kind == "stationary") {
        const std::vector<double> mu = riskavi::stationary_distribution(
            plan.at("p_good").get<double>(), plan.at("k_star").get<int>());
        result["distribution"] = mu;
        std::cout << "stationary distribution: (";
        for (std::size_t i = 0; i < mu.size(); ++i)
            std::cout << (i ? ", " : "") << mu[i];
        std::cout << ")\n";
        if (plan.contains("delta2")) {
            const double mu_min = *std::min_element(mu.begin(), mu.end());
            const double t = riskavi::mixing_time_bound(plan.at("delta2").get<double>(), mu_min);
            result["mixing_time"] = t;
            std::cout << "mixing time bound: " << t << "\n";
        }
    } else if (kind == "dominance") {
        const std::int64_t k = riskavi::dominance_iterations(
            plan.at("eps_g").get<double>(), plan.at("delta2").get<double>(),
            plan.at("j_max").get<double>(), plan.at("p_good").get<double>());
        result["iterations"] = k;
        std::cout << "dominance iteration count: " << k << "\n";
    } else if (kind == "sample-ratio") {
        const riskavi::SampleRatio r = riskavi::sample_ratio(
            plan.at("gamma").get<double>(), plan.at("iterations").get<std::int64_t>(),
            plan.at("eps").get<double>(), plan.at("delta").get<double>(),
            plan.at("j_max").get<double>(), plan.value("n_states", std::int64_t{1}),
            plan.value("n_actions", std::int64_t{1}), plan.value("c_const", 1.0));
        result["m1"] = r.m1;
        result["m2"] = r.m2;
        result["ratio"] = r.ratio;
        std::cout << "sample ratio: m1=" << r.m1 << " m2=" << r.m2 << " m1/m2=" << r.ratio
                  << "\n";
    } else if (kind == "min-samples") {
        const riskavi::RiskSpec risk = riskavi::risk_spec_from_json(plan.at("risk"));
        const std::int64_t m = riskavi::min_samples_for(
            risk, plan.at("eps").get<double>(), plan.at("delta").get<double>(),
            plan.at("j_max").get<double>(), plan.value("n_states", std::int64_t{1}),
            plan.value("n_actions", std::int64_t{1}));
        result["m"] = m;
        std::cout << "minimal per-pair sample count: " << m << "\n";
    } else {
        throw std::invalid_argument("unknown bound plan '" + kind + "'");
    }
    return result;
}

int cmd_bounds(const CommonArgs& args) {
    const json config = load_json(args.config_path);
    const fs::path out = resolve_out_dir(args, config);

    json plans = json::array();
    if (config.contains("plans"))
        plans = config.at("plans");
    else
        plans.push_back(config);

    json results = json::array();
    for (const json& plan : plans) results.push_back(run_bound_plan(plan));
    write_json_file(out / "bounds.json", results);
    log_info("bounds: wrote bounds.json to " + out.string());
    return 0;
}

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "Path to the JSON configuration")
        ->required();
    sub->add_option("--out", args.out_dir, "Output directory (default: config out_dir or .)");
    sub->add_option("--seed", args.seed_override, "Override the config seed");
    sub->add_option("--threads", args.threads_override, "Cap the worker-thread count");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation-based approximate value iteration for risk-aware MDPs"};
    app.require_subcommand(1);

    CommonArgs solve_args, eval_args, bench_args, bounds_args;
    CLI::App* solve = app.add_subcommand("solve", "Run approximate value iteration");
    add_common(solve, solve_args);
    CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a fixed policy");
    add_common(evaluate, eval_args);
    CLI::App* bench =
        app.add_subcommand("bench-maintenance", "Run the maintenance benchmark sweep");
    add_common(bench, bench_args);
    CLI::App* bounds = app.add_subcommand("bounds", "Run sample-complexity calculators");
    add_common(bounds, bounds_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_args);
        if (evaluate->parsed()) return cmd_evaluate(eval_args);
        if (bench->parsed()) return cmd_bench_maintenance(bench_args);
        if (bounds->parsed()) return cmd_bounds(bounds_args);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    log_debug("no subcommand dispatched");
    return 1;
}

#include "riskavi/io.hpp"

#include <cstdio>

namespace riskavi {

json to_json(const RiskSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    switch (spec.kind) {
        case RiskKind::Expectation:
            break;
        case RiskKind::CVaR:
            j["alpha"] = spec.alpha;
            break;
        case RiskKind::OCE:
            j["beta1"] = spec.beta1;
            j["beta2"] = spec.beta2;
            break;
        case RiskKind::MeanDeviation:
        case RiskKind::MeanSemideviation:
            j["b"] = spec.b;
            j["p_order"] = spec.p_order;
            break;
    }
    return j;
}

RiskSpec risk_spec_from_json(const json& j) {
    RiskSpec spec;
    spec.kind = risk_kind_from_string(j.at("kind").get<std::string>());
    spec.alpha = j.value("alpha", 0.0);
    spec.b = j.value("b", 0.0);
    spec.p_order = j.value("p_order", 1.0);
    spec.beta1 = j.value("beta1", 0.0);
    spec.beta2 = j.value("beta2", 2.0);
    spec.validate();
    return spec;
}

json to_json(const TabularMdp& mdp) {
    json transitions = json::array();
    for (int s = 0; s < mdp.n_states; ++s) {
        json row = json::array();
        for (int a = 0; a < mdp.n_actions; ++a) {
            json atoms = json::array();
            const DiscreteDist& dist = mdp.transitions[s][a];
            for (std::size_t i = 0; i < dist.size(); ++i)
                atoms.push_back({dist.values[i], dist.probs[i]});
            row.push_back(atoms);
        }
        transitions.push_back(row);
    }
    return json{{"n_states", mdp.n_states},
                {"n_actions", mdp.n_actions},
                {"gamma", mdp.gamma},
                {"costs", mdp.costs},
                {"transitions", transitions}};
}

TabularMdp tabular_from_json(const json& j) {
    TabularMdp mdp;
    mdp.n_states = j.at("n_states").get<int>();
    mdp.n_actions = j.at("n_actions").get<int>();
    mdp.gamma = j.at("gamma").get<double>();
    mdp.costs = j.at("costs").get<std::vector<std::vector<double>>>();
    for (const auto& row : j.at("transitions")) {
        std::vector<DiscreteDist> dists;
        for (const auto& atoms : row) {
            DiscreteDist dist;
            for (const auto& atom : atoms) {
                dist.values.push_back(atom.at(0).get<double>());
                dist.probs.push_back(atom.at(1).get<double>());
            }
            dists.push_back(std::move(dist));
        }
        mdp.transitions.push_back(std::move(dists));
    }
    return tabular_from_spec(std::move(mdp));
}

json to_json(const ValueFn& fn) {
    json j;
    j["bad_value"] = fn.bad_value();
    j["j_max"] = fn.j_max();
    j["s_max"] = fn.s_max();
    if (fn.variant() == ValueFnVariant::Polynomial) {
        j["variant"] = "polynomial";
        j["coeffs"] = fn.coeffs();
    } else {
        j["variant"] = "piecewise-constant";
        j["net"] = json{{"epsilon", fn.net().epsilon},
                        {"s_max", fn.net().s_max},
                        {"representatives", fn.net().representatives}};
        j["values"] = fn.cell_values();
    }
    return j;
}

ValueFn value_fn_from_json(const json& j) {
    const auto variant = j.at("variant").get<std::string>();
    const double bad_value = j.at("bad_value").get<double>();
    const double j_max = j.at("j_max").get<double>();
    if (variant == "polynomial") {
        return ValueFn::polynomial(j.at("coeffs").get<std::vector<double>>(), bad_value,
                                   j.at("s_max").get<double>(), j_max);
    }
    if (variant == "piecewise-constant") {
        EpsNet net;
        net.epsilon = j.at("net").at("epsilon").get<double>();
        net.s_max = j.at("net").at("s_max").get<double>();
        net.representatives = j.at("net").at("representatives").get<std::vector<double>>();
        return ValueFn::piecewise_constant(std::move(net),
                                           j.at("values").get<std::vector<double>>(),
                                           bad_value, j_max);
    }
    throw std::invalid_argument("unknown ValueFn variant: " + variant);
}

json to_json(const AviRun& run) {
    json iterates = json::array();
    for (const ValueFn& fn : run.iterates) iterates.push_back(to_json(fn));
    json diags = json::array();
    for (const IterationDiag& d : run.diagnostics)
        diags.push_back({{"fit_residual_rms", d.fit_residual_rms}, {"wall_ms", d.wall_ms}});
    return json{{"iterates", iterates}, {"diagnostics", diags}};
}

AviRun avi_run_from_json(const json& j) {
    AviRun run;
    for (const auto& fn : j.at("iterates")) run.iterates.push_back(value_fn_from_json(fn));
    for (const auto& d : j.at("diagnostics"))
        run.diagnostics.push_back(IterationDiag{d.at("fit_residual_rms").get<double>(),
                                                d.at("wall_ms").get<double>()});
    return run;
}

json to_json(const BoundReport& report) {
    return json{{"iterations", report.iterations},
                {"n", report.n},
                {"m", report.m},
                {"epsilon_net", report.epsilon_net},
                {"failure_prob", report.failure_prob},
                {"guarantee", report.guarantee}};
}

BoundReport bound_report_from_json(const json& j) {
    BoundReport report;
    report.iterations = j.at("iterations").get<std::int64_t>();
    report.n = j.at("n").get<std::int64_t>();
    report.m = j.at("m").get<std::int64_t>();
    report.epsilon_net = j.at("epsilon_net").get<double>();
    report.failure_prob = j.at("failure_prob").get<double>();
    report.guarantee = j.at("guarantee").get<std::string>();
    return report;
}

BoundInputs bound_inputs_from_json(const json& j) {
    BoundInputs in;
    in.risk = risk_spec_from_json(j.at("risk"));
    in.gamma = j.at("gamma").get<double>();
    in.j_max = j.at("j_max").get<double>();
    in.s_max = j.value("s_max", 1.0);
    in.eps = j.at("eps").get<double>();
    in.delta = j.at("delta").get<double>();
    in.p_norm = j.value("p_norm", 2.0);
    in.eps_g = j.value("eps_g", in.eps);
    in.delta1 = j.value("delta1", in.delta / 2.0);
    in.delta2 = j.value("delta2", in.delta / 4.0);
    in.kappa_c = j.value("kappa_c", 1.0);
    in.kappa_mu = j.value("kappa_mu", 1.0);
    in.c_rho_mu = j.value("c_rho_mu", 1.0);
    in.inherent_bellman_error = j.value("inherent_bellman_error", 0.0);
    in.pseudo_dim = j.value("pseudo_dim", 1);
    in.n_states = j.value("n_states", std::int64_t{1});
    in.n_actions = j.value("n_actions", std::int64_t{1});
    in.validate();
    return in;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace riskavi

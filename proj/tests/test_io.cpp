#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <string>

#include "riskavi/engine.hpp"
#include "riskavi/io.hpp"

using namespace riskavi;

namespace {

TabularMdp random_instance(Rng& rng) {
    TabularMdp mdp;
    mdp.n_states = 5;
    mdp.n_actions = 2;
    mdp.gamma = 0.6;
    for (int s = 0; s < 5; ++s) {
        std::vector<double> costs;
        std::vector<DiscreteDist> dists;
        for (int a = 0; a < 2; ++a) {
            costs.push_back(rng.uniform(0.0, 1.0));
            DiscreteDist d;
            d.values = {0.0, 1.0, 2.0, 3.0, 4.0};
            double total = 0.0;
            for (int t = 0; t < 5; ++t) {
                d.probs.push_back(rng.uniform(0.1, 1.0));
                total += d.probs.back();
            }
            for (double& p : d.probs) p /= total;
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < d.probs.size(); ++i) acc += d.probs[i];
            d.probs.back() = 1.0 - acc;
            dists.push_back(std::move(d));
        }
        mdp.costs.push_back(std::move(costs));
        mdp.transitions.push_back(std::move(dists));
    }
    return mdp;
}

}  // namespace

TEST_CASE("RiskSpec JSON round trip for every kind") {
    const RiskSpec specs[] = {RiskSpec::expectation(), RiskSpec::cvar(0.35),
                              RiskSpec::oce(0.25, 1.75), RiskSpec::mean_deviation(0.5, 2.0),
                              RiskSpec::mean_semideviation(0.75, 3.0)};
    for (const RiskSpec& spec : specs) {
        const RiskSpec back = risk_spec_from_json(to_json(spec));
        CHECK(back.kind == spec.kind);
        CHECK(back.alpha == spec.alpha);
        if (spec.kind == RiskKind::OCE) {
            CHECK(back.beta1 == spec.beta1);
            CHECK(back.beta2 == spec.beta2);
        }
        if (spec.kind == RiskKind::MeanDeviation ||
            spec.kind == RiskKind::MeanSemideviation) {
            CHECK(back.b == spec.b);
            CHECK(back.p_order == spec.p_order);
        }
    }
}

TEST_CASE("TabularMdp JSON round trip preserves the instance exactly") {
    Rng rng(stream_key({61, 0}));
    const TabularMdp mdp = random_instance(rng);
    const TabularMdp back = tabular_from_json(to_json(mdp));
    CHECK(back.n_states == mdp.n_states);
    CHECK(back.n_actions == mdp.n_actions);
    CHECK(back.gamma == mdp.gamma);
    for (int s = 0; s < 5; ++s)
        for (int a = 0; a < 2; ++a) {
            CHECK(back.costs[s][a] == mdp.costs[s][a]);
            for (std::size_t i = 0; i < 5; ++i) {
                CHECK(back.transitions[s][a].values[i] == mdp.transitions[s][a].values[i]);
                CHECK(back.transitions[s][a].probs[i] == mdp.transitions[s][a].probs[i]);
            }
        }
}

TEST_CASE("malformed TabularMdp JSON is rejected") {
    Rng rng(stream_key({62, 0}));
    json j = to_json(random_instance(rng));
    j["transitions"][0][0][0][1] = 0.5;  // breaks normalization
    CHECK_THROWS_AS(tabular_from_json(j), std::invalid_argument);
}

TEST_CASE("ValueFn JSON round trip, both variants") {
    const ValueFn poly = ValueFn::polynomial({1.0, -2.5, 0.125}, 42.0, 30.0, 100.0);
    const ValueFn poly_back = value_fn_from_json(to_json(poly));
    CHECK(poly_back == poly);

    const EpsNet net = build_eps_net(30.0, 1.0);
    std::vector<double> values(net.size(), 3.0);
    const ValueFn pwc = ValueFn::piecewise_constant(net, values, 7.0, 100.0);
    const ValueFn pwc_back = value_fn_from_json(to_json(pwc));
    CHECK(pwc_back == pwc);

    json bad = to_json(poly);
    bad["variant"] = "spline";
    CHECK_THROWS_AS(value_fn_from_json(bad), std::invalid_argument);
}

TEST_CASE("AviRun JSON round trip") {
    Rng rng(stream_key({63, 0}));
    const TabularSimModel model(random_instance(rng));
    AviConfig cfg;
    cfg.risk = RiskSpec::cvar(0.5);
    cfg.n = 5;
    cfg.m = 25;
    cfg.iterations = 3;
    cfg.fit.kind = FitSpec::Kind::PiecewiseConstant;
    cfg.fit.epsilon = 1.0;
    cfg.seed = 123;
    const AviRun run = run_avi(model, cfg);
    const AviRun back = avi_run_from_json(to_json(run));
    REQUIRE(back.iterates.size() == run.iterates.size());
    for (std::size_t k = 0; k < run.iterates.size(); ++k)
        CHECK(back.iterates[k] == run.iterates[k]);
    for (std::size_t k = 0; k < run.diagnostics.size(); ++k) {
        CHECK(back.diagnostics[k].fit_residual_rms == run.diagnostics[k].fit_residual_rms);
        CHECK(back.diagnostics[k].wall_ms == run.diagnostics[k].wall_ms);
    }
}

TEST_CASE("BoundReport JSON round trip") {
    BoundReport rep;
    rep.iterations = 30;
    rep.n = 1104;
    rep.m = 344548;
    rep.epsilon_net = 0.0271739;
    rep.failure_prob = 0.0999;
    rep.guarantee = "test";
    const BoundReport back = bound_report_from_json(to_json(rep));
    CHECK(back.iterations == rep.iterations);
    CHECK(back.n == rep.n);
    CHECK(back.m == rep.m);
    CHECK(back.epsilon_net == rep.epsilon_net);
    CHECK(back.failure_prob == rep.failure_prob);
    CHECK(back.guarantee == rep.guarantee);
}

TEST_CASE("format_double survives a parse round trip bit-exactly") {
    Rng rng(stream_key({64, 0}));
    for (int t = 0; t < 1000; ++t) {
        const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-8.0, 8.0));
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(std::stod(format_double(0.1)) == 0.1);
}

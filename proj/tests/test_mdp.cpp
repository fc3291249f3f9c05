#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "riskavi/mdp.hpp"

using namespace riskavi;

namespace {

TabularMdp two_state_chain() {
    TabularMdp mdp;
    mdp.n_states = 2;
    mdp.n_actions = 1;
    mdp.gamma = 0.5;
    mdp.costs = {{1.0}, {0.0}};
    mdp.transitions = {{DiscreteDist::point_mass(1.0)}, {DiscreteDist::point_mass(1.0)}};
    return mdp;
}

}  // namespace

TEST_CASE("maintenance costs match the benchmark parameters") {
    const MaintParams p;
    CHECK(maint_cost(State{5.0, false}, Keep, p) == doctest::Approx(20.0));
    CHECK(maint_cost(State{5.0, false}, Repair, p) == doctest::Approx(30.0));
    CHECK(maint_cost(State{29.0, false}, Repair, p) == doctest::Approx(30.0));
    CHECK(maint_cost(State::bad_state(), Keep, p) == doctest::Approx(120.0));
    CHECK(maint_cost(State::bad_state(), Repair, p) == doctest::Approx(120.0));
}

TEST_CASE("maintenance cost bound and j_max") {
    const MaintenanceModel model{MaintParams{}};
    CHECK(model.c_max() == doctest::Approx(120.0));
    CHECK(model.j_max() == doctest::Approx(300.0));
    CHECK(model.has_bad_state());
}

TEST_CASE("bad state is absorbing under both actions") {
    const MaintParams p;
    Rng rng(stream_key({21, 0}));
    State s = State::bad_state();
    for (int k = 0; k < 100; ++k) {
        s = maint_sample_next(s, k % 2, p, rng);
        CHECK(s.bad);
    }
}

TEST_CASE("Keep breakdown frequency matches q") {
    const MaintParams p;
    Rng rng(stream_key({22, 0}));
    int bad = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i)
        if (maint_sample_next(State{0.0, false}, Keep, p, rng).bad) ++bad;
    CHECK(std::abs(static_cast<double>(bad) / n - 0.2) <= 0.002);
}

TEST_CASE("Repair next-state mean matches the exponential mean") {
    const MaintParams p;
    Rng rng(stream_key({23, 0}));
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const State next = maint_sample_next(State{17.0, false}, Repair, p, rng);
        CHECK_FALSE(next.bad);
        CHECK(next.value >= 0.0);
        CHECK(next.value <= p.s_max);
        sum += next.value;
    }
    CHECK(std::abs(sum / n - 2.0) <= 0.02);
}

TEST_CASE("Keep next-state values stay within the truncation bound") {
    const MaintParams p;
    Rng rng(stream_key({24, 0}));
    for (int i = 0; i < 10000; ++i) {
        const State next = maint_sample_next(State{29.5, false}, Keep, p, rng);
        if (!next.bad) {
            CHECK(next.value >= 0.0);
            CHECK(next.value <= p.s_max);
        }
    }
}

TEST_CASE("sample_state_dist mixture weights and support") {
    const MaintParams p;
    Rng rng(stream_key({25, 0}));
    const auto states = sample_state_dist(p, 1000000, rng);
    int bad = 0;
    double sum = 0.0;
    int non_bad = 0;
    for (const State& s : states) {
        if (s.bad) {
            ++bad;
        } else {
            CHECK(s.value >= 0.0);
            CHECK(s.value <= 30.0);
            sum += s.value;
            ++non_bad;
        }
    }
    CHECK(std::abs(static_cast<double>(bad) / states.size() - 0.05) <= 0.001);
    CHECK(std::abs(sum / non_bad - 15.0) <= 0.05);
}

TEST_CASE("maintenance parameter validation") {
    MaintParams p;
    p.gamma = 1.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = MaintParams{};
    p.q = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = MaintParams{};
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("tabular_from_spec validates and accepts well-formed instances") {
    CHECK_NOTHROW(tabular_from_spec(two_state_chain()));

    TabularMdp bad = two_state_chain();
    bad.transitions[0][0].probs = {0.9};
    CHECK_THROWS_AS(tabular_from_spec(bad), std::invalid_argument);

    bad = two_state_chain();
    bad.transitions[0][0].values = {5.0};
    CHECK_THROWS_AS(tabular_from_spec(bad), std::invalid_argument);

    bad = two_state_chain();
    bad.costs[0][0] = -1.0;
    CHECK_THROWS_AS(tabular_from_spec(bad), std::invalid_argument);
}

TEST_CASE("tabular simulation adapter embeds states at cell midpoints") {
    const TabularSimModel model(two_state_chain());
    CHECK(model.state_max() == doctest::Approx(2.0));
    CHECK_FALSE(model.has_bad_state());
    CHECK(model.cost(TabularSimModel::embed(0), 0) == doctest::Approx(1.0));
    CHECK(model.cost(TabularSimModel::embed(1), 0) == doctest::Approx(0.0));
    Rng rng(stream_key({26, 0}));
    const State next = model.sample_next(TabularSimModel::embed(0), 0, rng);
    CHECK(next.value == doctest::Approx(1.5));
    CHECK_THROWS_AS(model.cost(State::bad_state(), 0), std::invalid_argument);
    CHECK_THROWS_AS(model.cost(State{7.0, false}, 0), std::invalid_argument);
}

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "riskavi/risk.hpp"
#include "riskavi/rng.hpp"

using namespace riskavi;

namespace {

std::vector<double> random_samples(Rng& rng, std::size_t m, double lo, double hi) {
    std::vector<double> v(m);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

}  // namespace

TEST_CASE("cvar_empirical frozen examples") {
    const std::vector<double> a{1.0, 3.0};
    CHECK(cvar_empirical(a, 0.0) == doctest::Approx(2.0).epsilon(1e-12));

    // eta in {1,2,3,4} gives objective values 4, 3.5, 3.5, 4.
    const std::vector<double> b{1.0, 2.0, 3.0, 4.0};
    CHECK(cvar_empirical(b, 0.5) == doctest::Approx(3.5).epsilon(1e-12));

    const std::vector<double> c(7, 4.25);
    for (double alpha : {0.0, 0.3, 0.9})
        CHECK(cvar_empirical(c, alpha) == doctest::Approx(4.25).epsilon(1e-12));
}

TEST_CASE("cvar_empirical at level zero is the sample mean") {
    Rng rng(stream_key({11, 0}));
    for (int t = 0; t < 20; ++t) {
        const auto v = random_samples(rng, 37, 0.0, 10.0);
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        CHECK(std::abs(cvar_empirical(v, 0.0) - mean) <= 1e-12);
    }
}

TEST_CASE("cvar_empirical is nondecreasing in alpha and bounded by sample range") {
    Rng rng(stream_key({12, 0}));
    const auto v = random_samples(rng, 200, 0.0, 10.0);
    double prev = -1.0;
    for (double alpha : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        const double val = cvar_empirical(v, alpha);
        CHECK(val >= prev - 1e-12);
        CHECK(val >= *std::min_element(v.begin(), v.end()) - 1e-12);
        CHECK(val <= *std::max_element(v.begin(), v.end()) + 1e-12);
        prev = val;
    }
}

TEST_CASE("cvar_empirical parameter and input errors") {
    const std::vector<double> v{1.0};
    CHECK_THROWS_AS(cvar_empirical(v, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cvar_empirical(v, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(cvar_empirical(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST_CASE("oce_empirical on constant samples returns the constant") {
    const std::vector<double> v(9, 3.5);
    CHECK(oce_empirical(v, 0.0, 2.0) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(oce_empirical(v, 0.5, 1.5) == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("oce_empirical two-point frozen example") {
    // With slopes (0, 2) the objective at eta in {0, 10} is 10 at both
    // breakpoints (eta=0: 0 + (2*10)/2 = 10; eta=10: 10 + 0 = 10), matching
    // CVaR at level 1/2 on the same samples.
    const std::vector<double> v{0.0, 10.0};
    CHECK(oce_empirical(v, 0.0, 2.0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(oce_empirical(v, 0.0, 2.0) ==
          doctest::Approx(cvar_empirical(v, 0.5)).epsilon(1e-12));
}

TEST_CASE("oce_empirical with slopes (0, 1/(1-alpha)) equals cvar_empirical") {
    Rng rng(stream_key({13, 0}));
    for (int t = 0; t < 50; ++t) {
        const auto v = random_samples(rng, 101, 0.0, 10.0);
        for (double alpha : {0.1, 0.5, 0.9}) {
            const double oce = oce_empirical(v, 0.0, 1.0 / (1.0 - alpha));
            const double cvar = cvar_empirical(v, alpha);
            CHECK(std::abs(oce - cvar) <= 1e-12);
        }
    }
}

TEST_CASE("oce_empirical slope validation") {
    const std::vector<double> v{1.0};
    CHECK_THROWS_AS(oce_empirical(v, -0.1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(oce_empirical(v, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(oce_empirical(v, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("mean deviation and semideviation frozen examples") {
    const std::vector<double> v{0.0, 2.0};
    CHECK(mean_deviation_empirical(v, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mean_semideviation_empirical(v, 1.0, 1.0) == doctest::Approx(1.5).epsilon(1e-12));

    const std::vector<double> c(5, 7.0);
    CHECK(mean_deviation_empirical(c, 2.0, 3.0) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(mean_semideviation_empirical(c, 2.0, 3.0) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("b = 0 reduces both deviation measures to the sample mean") {
    Rng rng(stream_key({14, 0}));
    const auto v = random_samples(rng, 64, 0.0, 5.0);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    CHECK(mean_deviation_empirical(v, 0.0, 2.0) == doctest::Approx(mean).epsilon(1e-12));
    CHECK(mean_semideviation_empirical(v, 0.0, 2.0) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("semideviation never exceeds deviation") {
    Rng rng(stream_key({15, 0}));
    for (int t = 0; t < 50; ++t) {
        const auto v = random_samples(rng, 33, 0.0, 10.0);
        for (double p : {1.0, 2.0, 3.0})
            CHECK(mean_semideviation_empirical(v, 0.7, p) <=
                  mean_deviation_empirical(v, 0.7, p) + 1e-12);
    }
}

TEST_CASE("translation equivariance and positive homogeneity of all estimators") {
    Rng rng(stream_key({16, 0}));
    const RiskSpec specs[] = {RiskSpec::expectation(), RiskSpec::cvar(0.4),
                              RiskSpec::oce(0.3, 1.7), RiskSpec::mean_deviation(0.5, 2.0),
                              RiskSpec::mean_semideviation(0.5, 2.0)};
    for (int t = 0; t < 100; ++t) {
        const auto v = random_samples(rng, 57, 0.0, 5.0);
        const double c = rng.uniform(0.0, 3.0);
        const double lambda = rng.uniform(0.1, 2.0);
        std::vector<double> shifted = v, scaled = v;
        for (double& x : shifted) x += c;
        for (double& x : scaled) x *= lambda;
        for (const RiskSpec& spec : specs) {
            const double base = risk_empirical(v, spec);
            CHECK(std::abs(risk_empirical(shifted, spec) - (base + c)) <= 1e-9);
            CHECK(std::abs(risk_empirical(scaled, spec) - lambda * base) <= 1e-9);
        }
    }
}

TEST_CASE("monotonicity of CVaR and OCE estimators") {
    Rng rng(stream_key({17, 0}));
    for (int t = 0; t < 100; ++t) {
        const auto lo = random_samples(rng, 41, 0.0, 5.0);
        std::vector<double> hi = lo;
        for (double& x : hi) x += rng.uniform(0.0, 2.0);
        CHECK(cvar_empirical(lo, 0.3) <= cvar_empirical(hi, 0.3) + 1e-12);
        CHECK(oce_empirical(lo, 0.2, 1.8) <= oce_empirical(hi, 0.2, 1.8) + 1e-12);
    }
}

TEST_CASE("risk_exact_discrete frozen examples") {
    const DiscreteDist d{{1.0, 3.0}, {0.5, 0.5}};
    CHECK(risk_exact_discrete(d, RiskSpec::cvar(0.5)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(risk_exact_discrete(d, RiskSpec::cvar(0.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(risk_exact_discrete(d, RiskSpec::expectation()) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("risk_exact_discrete on a point mass returns the value for every kind") {
    const DiscreteDist pm = DiscreteDist::point_mass(4.2);
    const RiskSpec specs[] = {RiskSpec::expectation(), RiskSpec::cvar(0.7),
                              RiskSpec::oce(0.1, 3.0), RiskSpec::mean_deviation(1.0, 2.0),
                              RiskSpec::mean_semideviation(1.0, 2.0)};
    for (const RiskSpec& spec : specs)
        CHECK(risk_exact_discrete(pm, spec) == doctest::Approx(4.2).epsilon(1e-12));
}

TEST_CASE("empirical estimators are consistent with the exact discrete value") {
    const DiscreteDist d{{0.0, 2.0, 5.0, 8.0, 10.0}, {0.1, 0.25, 0.3, 0.2, 0.15}};
    const RiskSpec specs[] = {RiskSpec::cvar(0.5), RiskSpec::oce(0.2, 2.0),
                              RiskSpec::mean_deviation(0.5, 2.0),
                              RiskSpec::mean_semideviation(0.5, 2.0)};
    Rng rng(stream_key({18, 0}));
    std::vector<double> samples(100000);
    for (double& x : samples) {
        const double u = rng.uniform();
        double acc = 0.0;
        x = d.values.back();
        for (std::size_t i = 0; i < d.size(); ++i) {
            acc += d.probs[i];
            if (u < acc) {
                x = d.values[i];
                break;
            }
        }
    }
    for (const RiskSpec& spec : specs)
        CHECK(std::abs(risk_empirical(samples, spec) - risk_exact_discrete(d, spec)) <= 0.05);
}

TEST_CASE("DiscreteDist validation") {
    CHECK_THROWS_AS(risk_exact_discrete(DiscreteDist{{1.0, 2.0}, {0.5, 0.4}},
                                        RiskSpec::expectation()),
                    std::invalid_argument);
    CHECK_THROWS_AS(risk_exact_discrete(DiscreteDist{{1.0}, {0.0}}, RiskSpec::expectation()),
                    std::invalid_argument);
    CHECK_THROWS_AS(risk_exact_discrete(DiscreteDist{{}, {}}, RiskSpec::expectation()),
                    std::invalid_argument);
}

TEST_CASE("theta_bound frozen CVaR example") {
    // prefactor 2(1 + 4/(0.1*0.5)) = 162, exponent -m (0.05)^2 / (2*(1.5*10)^2).
    const double expected = 162.0 * std::exp(-1e6 * 0.0025 / 450.0);
    CHECK(theta_bound(RiskSpec::cvar(0.5), 0.1, 1000000, 10.0) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.626).epsilon(1e-3));
}

TEST_CASE("theta_bound is clamped, nonincreasing in m, nondecreasing as eps shrinks") {
    const RiskSpec specs[] = {RiskSpec::expectation(), RiskSpec::cvar(0.5),
                              RiskSpec::oce(0.2, 2.0), RiskSpec::mean_deviation(0.5, 2.0),
                              RiskSpec::mean_semideviation(0.5, 2.0)};
    for (const RiskSpec& spec : specs) {
        double prev = 2.0;
        for (std::int64_t m : {1, 10, 1000, 100000, 10000000}) {
            const double b = theta_bound(spec, 0.5, m, 10.0);
            CHECK(b >= 0.0);
            CHECK(b <= 1.0);
            CHECK(b <= prev + 1e-15);
            prev = b;
        }
        CHECK(theta_bound(spec, 0.25, 1000000, 10.0) >=
              theta_bound(spec, 0.5, 1000000, 10.0) - 1e-15);
    }
}

TEST_CASE("theta_bound for the expectation kind equals CVaR at level zero") {
    for (std::int64_t m : {100, 10000, 1000000})
        CHECK(theta_bound(RiskSpec::expectation(), 0.3, m, 7.0) ==
              doctest::Approx(theta_bound(RiskSpec::cvar(0.0), 0.3, m, 7.0)).epsilon(1e-15));
}

TEST_CASE("min_samples_for frozen example") {
    // 32 * 4 * (ln 2 + ln 8 + ln 17) = 717.5...; smallest integer strictly
    // exceeding the bound.
    CHECK(min_samples_for(RiskSpec::cvar(0.0), 1.0, 0.5, 1.0, 1, 1) == 718);
    const double raw = 128.0 * (std::log(2.0) + std::log(8.0) + std::log(17.0));
    CHECK(static_cast<std::int64_t>(std::floor(raw)) + 1 == 718);
}

TEST_CASE("min_samples_for at least quadruples when eps is halved") {
    const RiskSpec specs[] = {RiskSpec::cvar(0.3), RiskSpec::oce(0.1, 2.5),
                              RiskSpec::mean_semideviation(0.5, 2.0)};
    for (const RiskSpec& spec : specs) {
        const std::int64_t m1 = min_samples_for(spec, 1.0, 0.1, 10.0, 5, 2);
        const std::int64_t m2 = min_samples_for(spec, 0.5, 0.1, 10.0, 5, 2);
        CHECK(m2 >= 4 * (m1 - 1));
    }
}

TEST_CASE("min_samples_for output satisfies the quarter-accuracy theta inequality") {
    // Exact inversion property for the CVaR and OCE bounds; the deviation
    // bounds use a separate (weaker) constant and are not cross-checkable.
    struct Case {
        RiskSpec spec;
        double eps, delta, j;
        std::int64_t n, a;
    };
    const Case cases[] = {{RiskSpec::cvar(0.5), 1.0, 0.1, 10.0, 5, 2},
                          {RiskSpec::cvar(0.0), 2.0, 0.05, 10.0, 30, 2},
                          {RiskSpec::cvar(0.9), 0.5, 0.01, 10.0, 100, 4},
                          {RiskSpec::oce(0.2, 2.0), 1.0, 0.1, 10.0, 5, 2}};
    for (const Case& c : cases) {
        const std::int64_t m = min_samples_for(c.spec, c.eps, c.delta, c.j, c.n, c.a);
        CHECK(theta_bound(c.spec, c.eps / 4.0, m, c.j) <=
              c.delta / (4.0 * static_cast<double>(c.n * c.a)) + 1e-15);
    }
}

TEST_CASE("RiskSpec validation") {
    CHECK_THROWS_AS(RiskSpec::cvar(1.0), std::invalid_argument);
    CHECK_THROWS_AS(RiskSpec::oce(0.5, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(RiskSpec::mean_deviation(-1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(RiskSpec::mean_deviation(1.0, 0.5), std::invalid_argument);
    CHECK_NOTHROW(RiskSpec::cvar(0.0));
    CHECK_NOTHROW(RiskSpec::mean_semideviation(0.0, 1.0));
}

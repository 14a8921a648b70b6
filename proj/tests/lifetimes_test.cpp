#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bdkit/lifetimes.hpp"
#include "bdkit/rng.hpp"
#include "support.hpp"

using namespace bdkit;
using testsupport::ks_critical_1pct;
using testsupport::ks_statistic;
using testsupport::stats_of;

namespace {

std::vector<LifetimeDistribution> all_kinds() {
    return {LifetimeDistribution::exponential(),    LifetimeDistribution::deterministic(),
            LifetimeDistribution::gamma(2.0),       LifetimeDistribution::gamma(0.5),
            LifetimeDistribution::uniform(1.0),     LifetimeDistribution::uniform(0.4),
            LifetimeDistribution::two_point(0.5, 0.25)};
}

std::vector<double> draw(const LifetimeDistribution& dist, std::size_t n, std::uint64_t seed,
                         bool residual = false) {
    RandomStream rng(seed, 0);
    std::vector<double> xs(n);
    for (auto& x : xs) x = residual ? dist.sample_residual(rng) : dist.sample(rng);
    return xs;
}

}  // namespace

TEST_CASE("construction enforces the mean-one parameterization") {
    for (const auto& d : all_kinds()) {
        CHECK(std::fabs(d.mean() - 1.0) <= 1e-12);
        CHECK(d.variance() >= 0.0);
        CHECK(std::isfinite(d.variance()));
    }
    CHECK_THROWS_AS(LifetimeDistribution::gamma(0.0), std::invalid_argument);
    CHECK_THROWS_AS(LifetimeDistribution::gamma(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(LifetimeDistribution::uniform(0.0), std::invalid_argument);
    CHECK_THROWS_AS(LifetimeDistribution::uniform(1.5), std::invalid_argument);
    CHECK_THROWS_AS(LifetimeDistribution::two_point(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(LifetimeDistribution::two_point(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(LifetimeDistribution::two_point(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("closed-form variances") {
    CHECK(LifetimeDistribution::exponential().variance() == 1.0);
    CHECK(LifetimeDistribution::deterministic().variance() == 0.0);
    CHECK(LifetimeDistribution::gamma(2.0).variance() == Catch::Approx(0.5));
    CHECK(LifetimeDistribution::gamma(0.5).variance() == Catch::Approx(2.0));
    CHECK(LifetimeDistribution::uniform(1.0).variance() == Catch::Approx(1.0 / 3.0));
    // two-point: a=0.5 w.p. 0.25, b=7/6 w.p. 0.75
    CHECK(LifetimeDistribution::two_point(0.5, 0.25).second_moment() == Catch::Approx(13.0 / 12.0));
}

TEST_CASE("sampling: point mass and empirical moments") {
    RandomStream rng(42, 0);
    const auto det = LifetimeDistribution::deterministic();
    for (int i = 0; i < 100; ++i) CHECK(det.sample(rng) == 1.0);

    const auto exp_draws = draw(LifetimeDistribution::exponential(), 1000000, 7);
    const auto es = stats_of(exp_draws);
    CHECK(std::fabs(es.mean - 1.0) <= 4e-3);  // 4 SE with SE = 1/sqrt(n)

    const auto g2 = draw(LifetimeDistribution::gamma(2.0), 1000000, 8);
    const auto gs = stats_of(g2);
    // SE of the sample variance via the fourth central moment
    double m4 = 0.0;
    for (double x : g2) m4 += std::pow(x - gs.mean, 4);
    m4 /= static_cast<double>(g2.size());
    const double se_var = std::sqrt((m4 - gs.variance * gs.variance) / static_cast<double>(g2.size()));
    CHECK(std::fabs(gs.variance - 0.5) <= 4.0 * se_var);
}

TEST_CASE("every kind: mean of a million draws within 4 SE of 1") {
    std::uint64_t seed = 100;
    for (const auto& d : all_kinds()) {
        const auto s = stats_of(draw(d, 1000000, seed++));
        INFO(d.label());
        CHECK(std::fabs(s.mean - 1.0) <= 4.0 * std::max(s.std_error, 1e-15));
    }
}

TEST_CASE("laplace transform closed forms") {
    for (const auto& d : all_kinds()) {
        INFO(d.label());
        CHECK(d.laplace(0.0) == 1.0);
    }
    CHECK(LifetimeDistribution::exponential().laplace(1.0) == Catch::Approx(0.5));
    CHECK(LifetimeDistribution::deterministic().laplace(2.0) == Catch::Approx(std::exp(-2.0)));
    CHECK(LifetimeDistribution::gamma(2.0).laplace(2.0) == Catch::Approx(0.25));
    CHECK_THROWS_AS(LifetimeDistribution::exponential().laplace(-0.1), std::invalid_argument);
}

TEST_CASE("laplace derivative at zero is -E[Q] = -1") {
    const double h = 1e-6;
    for (const auto& d : all_kinds()) {
        INFO(d.label());
        const double deriv = (d.laplace(h) - d.laplace(0.0)) / h;
        CHECK(std::fabs(deriv + 1.0) <= 1e-4);
    }
}

TEST_CASE("laplace is nonincreasing and convex on a theta grid") {
    for (const auto& d : all_kinds()) {
        INFO(d.label());
        double prev = d.laplace(0.0);
        double prev_diff = 0.0;
        bool first = true;
        for (int i = 1; i <= 100; ++i) {
            const double cur = d.laplace(0.1 * i);
            const double diff = cur - prev;
            CHECK(diff <= 1e-15);
            if (!first) CHECK(diff >= prev_diff - 1e-12);  // increments increase: convexity
            prev_diff = diff;
            prev = cur;
            first = false;
        }
    }
}

TEST_CASE("laplace agrees with Monte Carlo expectation of exp(-theta Q)") {
    const double theta = 1.7;
    std::uint64_t seed = 300;
    for (const auto& d : all_kinds()) {
        INFO(d.label());
        const auto xs = draw(d, 200000, seed++);
        std::vector<double> ys(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = std::exp(-theta * xs[i]);
        const auto s = stats_of(ys);
        // the 1e-10 floor covers the degenerate point-mass case (SE = 0,
        // mean picks up summation rounding)
        CHECK(std::fabs(s.mean - d.laplace(theta)) <= 4.0 * s.std_error + 1e-10);
    }
}

TEST_CASE("empirical CDF passes a 1% KS test for every kind") {
    std::uint64_t seed = 500;
    for (const auto& d : all_kinds()) {
        INFO(d.label());
        const auto xs = draw(d, 100000, seed++);
        const double ks = ks_statistic(
            xs, [&](double x) { return d.cdf(x); }, [&](double x) { return d.pmf(x); });
        CHECK(ks < ks_critical_1pct(xs.size()));
    }
}

TEST_CASE("gamma cdf spot values") {
    // Gamma(2, rate 2): F(1) = 1 - 3 e^{-2}
    CHECK(LifetimeDistribution::gamma(2.0).cdf(1.0) == Catch::Approx(1.0 - 3.0 * std::exp(-2.0)).epsilon(1e-10));
    // Gamma(1, rate 1) is the unit exponential
    CHECK(LifetimeDistribution::gamma(1.0).cdf(0.7) == Catch::Approx(1.0 - std::exp(-0.7)).epsilon(1e-10));
}

TEST_CASE("residual sampling: exponential is unchanged, deterministic is uniform") {
    const auto exp_res = draw(LifetimeDistribution::exponential(), 100000, 600, true);
    const auto d_exp = LifetimeDistribution::exponential();
    const double ks = ks_statistic(
        exp_res, [&](double x) { return d_exp.cdf(x); }, [](double) { return 0.0; });
    CHECK(ks < ks_critical_1pct(exp_res.size()));

    const auto det_res = draw(LifetimeDistribution::deterministic(), 1000000, 601, true);
    const auto s = stats_of(det_res);
    CHECK(std::fabs(s.mean - 0.5) <= 4.0 * s.std_error);
    for (double x : det_res) {
        REQUIRE(x > 0.0);
        REQUIRE(x <= 1.0);
    }
}

TEST_CASE("residual mean equals E[Q^2]/2 for every kind") {
    std::uint64_t seed = 700;
    for (const auto& d : all_kinds()) {
        INFO(d.label());
        const auto xs = draw(d, 1000000, seed++, true);
        const auto s = stats_of(xs);
        CHECK(std::fabs(s.mean - d.second_moment() / 2.0) <= 4.0 * std::max(s.std_error, 1e-15));
    }
}

TEST_CASE("streams are reproducible and index-separated") {
    RandomStream a(123, 5), b(123, 5), c(123, 6);
    bool any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        any_diff = any_diff || (va != c.next_u64());
    }
    CHECK(any_diff);
}

TEST_CASE("distribution spec parsing round-trips") {
    CHECK(parse_lifetime("exp").kind() == LifetimeKind::Exponential);
    CHECK(parse_lifetime("det").kind() == LifetimeKind::Deterministic);
    const auto g = parse_lifetime("gamma:k=2");
    CHECK(g.kind() == LifetimeKind::Gamma);
    CHECK(g.param1() == 2.0);
    CHECK(g.label() == "gamma:k=2");
    const auto u = parse_lifetime("unif:w=0.5");
    CHECK(u.param1() == 0.5);
    CHECK(u.label() == "unif:w=0.5");
    const auto t = parse_lifetime("twopoint:a=0.5,p=0.25");
    CHECK(t.param1() == 0.5);
    CHECK(t.param2() == 0.25);
    CHECK(t.label() == "twopoint:a=0.5,p=0.25");
    CHECK_THROWS_AS(parse_lifetime("weibull:k=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lifetime("gamma:k=zzz"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lifetime("gamma:k=-1"), std::invalid_argument);
}

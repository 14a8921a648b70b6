#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bdkit/bd_analytic.hpp"
#include "bdkit/sis_analytic.hpp"

using namespace bdkit;

TEST_CASE("quasi-stationary law: small cases and normalization") {
    const auto q1 = sis_quasi_stationary(1, 2.0);
    CHECK(q1.pi[0] == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(q1.pi[1] == Catch::Approx(0.5).epsilon(1e-14));

    const auto q2 = sis_quasi_stationary(2, 1.0);
    CHECK(q2.pi[0] == Catch::Approx(4.0 / 9.0).epsilon(1e-13));
    CHECK(q2.pi[1] == Catch::Approx(4.0 / 9.0).epsilon(1e-13));
    CHECK(q2.pi[2] == Catch::Approx(1.0 / 9.0).epsilon(1e-13));

    double total = 0.0, total_tilde = 0.0;
    const auto q = sis_quasi_stationary(250, 1.7);
    for (double p : q.pi) total += p;
    for (double p : q.pi_tilde) total_tilde += p;
    CHECK(total == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(total_tilde == Catch::Approx(1.0).epsilon(1e-12));
    // conditional law is proportional to the unconditional one
    for (std::size_t n = 1; n < q.pi.size(); ++n)
        CHECK(q.pi_tilde[n - 1] * (1.0 - q.pi[0]) == Catch::Approx(q.pi[n]).epsilon(1e-12));
}

TEST_CASE("quasi-stationary mode sits next to the endemic level") {
    const auto q = sis_quasi_stationary(100, 2.0);
    std::size_t argmax = 0;
    for (std::size_t n = 1; n < q.pi.size(); ++n)
        if (q.pi[n] > q.pi[argmax]) argmax = n;
    // exact mode: the 1/n factor shifts it one below N(1-1/lambda) = 50
    CHECK(argmax == 49);
    CHECK(std::llabs(static_cast<long long>(argmax) - 50) <= 1);
}

TEST_CASE("exact mean duration: hand sums and frozen values") {
    CHECK(sis_mean_duration_exact(1, 0.7).linear() == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(sis_mean_duration_exact(2, 1.0).linear() == Catch::Approx(1.25).epsilon(1e-13));
    // frozen from an independent double-route evaluation
    CHECK(sis_mean_duration_exact(50, 0.8).linear() == Catch::Approx(1.8717485403135383).epsilon(1e-12));
    // within 7% (not closer!) of the large-N subcritical limit at N=50
    CHECK(sis_mean_duration_exact(50, 0.8).linear() ==
          Catch::Approx(branching_duration(0.8)).epsilon(0.08));
}

TEST_CASE("exact duration agrees with the generic weight route") {
    for (const auto& [n, lam] : {std::pair<std::int64_t, double>{50, 0.8},
                                 {40, 2.0},
                                 {300, 2.0},
                                 {17, 1.0}}) {
        INFO("N=" << n << " lambda=" << lam);
        const auto via_weights = mean_duration(BirthRateModel::sis(n, lam), n);
        const auto direct = sis_mean_duration_exact(n, lam);
        CHECK(std::fabs(via_weights.log_value - direct.log_value) <= 1e-10);
    }
}

TEST_CASE("exact mean progeny: hand sums and asymptotic consistency") {
    CHECK(sis_mean_progeny_exact(1, 2.0).linear() == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(sis_mean_progeny_exact(3, 1.0).linear() == Catch::Approx(17.0 / 9.0).epsilon(1e-13));
    const double gap = std::fabs(sis_mean_progeny_exact(300, 2.0).log_value -
                                 sis_progeny_asymptotic(300, 2.0).log_value);
    CHECK(gap < 0.05);
}

TEST_CASE("duration asymptotics by regime") {
    CHECK(sis_duration_asymptotic(1000, 0.5).linear() ==
          Catch::Approx(1.3862943611198906).epsilon(1e-12));
    const auto n_e2 = static_cast<std::int64_t>(std::llround(std::exp(2.0)));  // not exactly e^2
    CHECK(sis_duration_asymptotic(n_e2, 1.0).linear() ==
          Catch::Approx(0.5 * std::log(static_cast<double>(n_e2))).epsilon(1e-12));
    // frozen: log of sqrt(2 pi)/(lambda-1) e^{cN}/sqrt(N) at lambda=2, N=300
    CHECK(sis_duration_asymptotic(300, 2.0).log_value == Catch::Approx(56.01120146386016).epsilon(1e-10));
}

TEST_CASE("progeny asymptotic value, ratio identity, convergence") {
    CHECK(sis_progeny_asymptotic(300, 2.0).log_value == Catch::Approx(61.02183675795641).epsilon(1e-10));
    // E[C]/E[T] asymptotic ratio is N(lambda-1)/lambda
    for (const std::int64_t n : {100LL, 300LL, 777LL}) {
        const double got = sis_progeny_asymptotic(n, 2.0).log_value -
                           sis_duration_asymptotic(n, 2.0).log_value;
        CHECK(got == Catch::Approx(std::log(static_cast<double>(n) / 2.0)).epsilon(1e-12));
    }
    // exact sum within 10% at lambda=1.5, N=400
    const double ratio = std::exp(sis_mean_progeny_exact(400, 1.5).log_value -
                                  sis_progeny_asymptotic(400, 1.5).log_value);
    CHECK(std::fabs(ratio - 1.0) < 0.1);
    CHECK_THROWS_AS(sis_progeny_asymptotic(100, 1.0), SubcriticalInput);
    CHECK_THROWS_AS(sis_progeny_asymptotic(100, 0.5), SubcriticalInput);
}

TEST_CASE("subcritical duration converges to the branching limit") {
    CHECK(std::fabs(sis_mean_duration_exact(10000, 0.5).linear() - branching_duration(0.5)) < 1e-2);
}

TEST_CASE("critical duration grows like half log N") {
    const double d3 = sis_mean_duration_exact(1000, 1.0).linear();
    const double d7 = sis_mean_duration_exact(10000000, 1.0).linear();
    CHECK(std::fabs((d7 - d3) / (0.5 * std::log(1e4)) - 1.0) < 0.05);
}

TEST_CASE("supercritical log-gaps shrink with N") {
    std::vector<double> gap_t, gap_c;
    for (const std::int64_t n : {100LL, 200LL, 300LL, 500LL}) {
        gap_t.push_back(std::fabs(sis_mean_duration_exact(n, 2.0).log_value -
                                  sis_duration_asymptotic(n, 2.0).log_value));
        gap_c.push_back(std::fabs(sis_mean_progeny_exact(n, 2.0).log_value -
                                  sis_progeny_asymptotic(n, 2.0).log_value));
    }
    for (std::size_t i = 1; i < gap_t.size(); ++i) {
        CHECK(gap_t[i] < gap_t[i - 1]);
        CHECK(gap_c[i] < gap_c[i - 1]);
    }
    CHECK(gap_t[2] < 0.1);
    CHECK(gap_c[2] < 0.1);
}

TEST_CASE("extinction probability fixed point") {
    // subcritical/critical: certain extinction, no iteration
    for (const auto& d : {LifetimeDistribution::exponential(), LifetimeDistribution::gamma(0.5)}) {
        const auto sol = extinction_probability(d, 0.5);
        CHECK(sol.p_q == 1.0);
        CHECK(sol.iterations == 0);
        CHECK(extinction_probability(d, 1.0).p_q == 1.0);
    }
    // exponential lifetimes: p = 1/lambda
    const auto e = extinction_probability(LifetimeDistribution::exponential(), 2.0);
    CHECK(e.p_q == Catch::Approx(0.5).epsilon(1e-10));
    CHECK(e.residual <= 1e-12);
    // deterministic lifetimes: frozen fixed point of p = exp(-2(1-p))
    const auto d = extinction_probability(LifetimeDistribution::deterministic(), 2.0);
    CHECK(d.p_q == Catch::Approx(0.20318786997997945).margin(1e-9));
    // gamma(2): algebraic root (3 - sqrt 5)/2 of p (2-p)^2 = 1
    const auto g = extinction_probability(LifetimeDistribution::gamma(2.0), 2.0);
    CHECK(g.p_q == Catch::Approx((3.0 - std::sqrt(5.0)) / 2.0).margin(1e-10));
    CHECK_THROWS_AS(extinction_probability(LifetimeDistribution::exponential(), -1.0),
                    std::invalid_argument);
}

TEST_CASE("extinction probability is monotone in lambda and least for constant Q") {
    const std::vector<LifetimeDistribution> dists = {
        LifetimeDistribution::exponential(), LifetimeDistribution::deterministic(),
        LifetimeDistribution::gamma(2.0),    LifetimeDistribution::gamma(0.5),
        LifetimeDistribution::uniform(1.0),  LifetimeDistribution::two_point(0.5, 0.25)};
    for (const auto& d : dists) {
        INFO(d.label());
        double prev = 1.0;
        for (int i = 1; i <= 40; ++i) {
            const double lam = 1.0 + 0.1 * i;
            const double p = extinction_probability(d, lam).p_q;
            CHECK(p <= prev + 1e-12);
            CHECK(p < 1.0);
            prev = p;
        }
    }
    const auto det = LifetimeDistribution::deterministic();
    for (int i = 1; i <= 40; ++i) {
        const double lam = 1.0 + 0.1 * i;
        const double p_det = extinction_probability(det, lam).p_q;
        for (const auto& d : dists) {
            INFO(d.label() << " lambda=" << lam);
            CHECK(p_det <= extinction_probability(d, lam).p_q + 1e-12);
        }
    }
}

TEST_CASE("endemic extinction mean") {
    // exponential: 1 - p = 1 - 1/lambda = 1/2, so the mean doubles
    const auto e = endemic_extinction_mean(40, 2.0, LifetimeDistribution::exponential());
    CHECK(e.log_value == Catch::Approx(sis_mean_duration_exact(40, 2.0).log_value + std::log(2.0))
                             .epsilon(1e-10));
    // deterministic: divide by the frozen 1 - p
    const auto d = endemic_extinction_mean(40, 2.0, LifetimeDistribution::deterministic());
    CHECK(d.log_value == Catch::Approx(sis_mean_duration_exact(40, 2.0).log_value -
                                       std::log(0.7968121300200206))
                             .epsilon(1e-10));
    // constant lifetimes persist for the shortest time
    CHECK(d.log_value < e.log_value);
    CHECK_THROWS_AS(endemic_extinction_mean(40, 0.9, LifetimeDistribution::exponential()),
                    SubcriticalInput);
}

TEST_CASE("household severity and threshold") {
    CHECK(household_severity_mean(1, 7.0) == 1.0);
    CHECK(household_severity_mean(3, 0.5) == 2.5);
    CHECK(household_severity_mean(2, 1.0) == 2.0);
    CHECK(household_rstar(1, 1.0, 0.3) == 1.0);
    CHECK(household_rstar(3, 0.4, 0.5) == 1.0);
    CHECK(household_rstar(3, 0.8, 0.5) == 2.0);
}

TEST_CASE("household phi vector") {
    const auto at_zero = household_phi(4, 1.3, 0.9, 0.0);
    CHECK(at_zero[0] == 1.0);
    for (std::size_t k = 1; k < at_zero.size(); ++k) CHECK(at_zero[k] == 0.0);

    for (double s : {0.2, 0.7, 1.0}) {
        const auto p = household_phi(1, 2.0, 0.0, s);
        CHECK(p[0] == Catch::Approx(1.0 / (1.0 + 2.0 * s)).epsilon(1e-13));
        CHECK(p[1] == Catch::Approx(2.0 * s / (1.0 + 2.0 * s)).epsilon(1e-13));
    }

    // recursion hand value at h=2, lambda_G = lambda_L = 1, s = 1
    const auto p = household_phi(2, 1.0, 1.0, 1.0);
    CHECK(p[0] == Catch::Approx(0.2).epsilon(1e-13));
    CHECK(p[1] == Catch::Approx(0.4).epsilon(1e-13));
    CHECK(p[2] == Catch::Approx(0.4).epsilon(1e-13));
}

TEST_CASE("phi satisfies its detailed balance recursion") {
    struct Case {
        std::int64_t h;
        double lg, ll, s;
    };
    for (const auto& c : std::vector<Case>{{3, 0.8, 0.5, 0.37}, {5, 1.7, 0.9, 0.91}, {7, 0.3, 2.2, 0.05}}) {
        const auto phi = household_phi(c.h, c.lg, c.ll, c.s);
        double total = 0.0;
        for (double v : phi) total += v;
        CHECK(total == Catch::Approx(1.0).epsilon(1e-12));
        for (std::int64_t k = 1; k <= c.h; ++k) {
            const double lhs = static_cast<double>(k) * phi[static_cast<std::size_t>(k)];
            const double rhs = static_cast<double>(c.h - k + 1) *
                               (c.s * c.lg + static_cast<double>(k - 1) * c.ll) *
                               phi[static_cast<std::size_t>(k - 1)];
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("household endemic equilibrium") {
    // h=1 reduces to the homogeneous endemic proportion
    const auto eq1 = household_endemic(1, 2.0, 0.0);
    CHECK(eq1.z == Catch::Approx(0.5).margin(1e-10));
    for (double lg : {1.2, 1.7, 2.5, 3.3, 4.1, 5.0}) {
        const auto eq = household_endemic(1, lg, 0.9);
        CHECK(eq.z == Catch::Approx((lg - 1.0) / lg).margin(1e-10));
        CHECK(eq.proportion() == Catch::Approx(eq.z).margin(1e-12));
    }

    // threshold case: extinct equilibrium
    const auto eq_thr = household_endemic(3, 0.4, 0.5);
    CHECK(eq_thr.r_star == 1.0);
    CHECK(eq_thr.z == 0.0);
    CHECK(eq_thr.phi[0] == 1.0);

    // supercritical: fixed point reproduces its own household mean
    const auto eq = household_endemic(3, 0.8, 0.5);
    CHECK(eq.r_star == 2.0);
    CHECK(eq.z > 0.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < eq.phi.size(); ++i) mean += static_cast<double>(i) * eq.phi[i];
    CHECK(std::fabs(mean - eq.z) <= 1e-10);
    // frozen from the independent bisection oracle
    CHECK(eq.proportion() == Catch::Approx(0.3696470471346892).margin(1e-9));

    // subcritical below threshold
    CHECK(household_endemic(3, 0.3, 0.5).z == 0.0);
}

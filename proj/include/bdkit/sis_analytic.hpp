#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bdkit/errors.hpp"
#include "bdkit/lifetimes.hpp"
#include "bdkit/log_weight.hpp"

namespace bdkit {

// ---------------------------------------------------------------------------
// Homogeneous SIS: exact quantities
// ---------------------------------------------------------------------------

struct QuasiStationary {
    std::int64_t population = 0;
    double lambda = 0.0;
    std::vector<double> pi;        // pi[n], n = 0..N, sums to 1
    std::vector<double> pi_tilde;  // pi_tilde[i] = pi(i+1)/(1-pi(0)), i = 0..N-1
};

namespace detail {

// log w(n) for the SIS weights w(n) = (N-1)!/(n (N-n)!) (lambda/N)^{n-1},
// by the ratio recurrence w(n+1)/w(n) = lambda n (N-n) / (N (n+1)).
class SisWeightIter {
public:
    SisWeightIter(std::int64_t population, double lambda)
        : n_(1), population_(population), log_rate_(std::log(lambda / static_cast<double>(population))), logw_(0.0) {}

    double logw() const { return logw_; }
    std::int64_t n() const { return n_; }
    bool has_next() const { return n_ < population_; }

    void advance() {
        logw_ += log_rate_ + std::log(static_cast<double>(n_) * static_cast<double>(population_ - n_) /
                                      static_cast<double>(n_ + 1));
        ++n_;
    }

private:
    std::int64_t n_;
    std::int64_t population_;
    double log_rate_;
    double logw_;
};

}  // namespace detail

// Stationary law of the regenerative SIS process:
// pi(n) = pi(0)/n * (N-1)!/(N-n)! * (lambda/N)^{n-1}, computed in log space,
// plus its quasi-equilibrium conditioning pi~(n) = pi(n)/(1-pi(0)).
inline QuasiStationary sis_quasi_stationary(std::int64_t population, double lambda) {
    if (population < 1) throw std::invalid_argument("sis_quasi_stationary: N must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("sis_quasi_stationary: lambda must be > 0");

    std::vector<double> logw(static_cast<std::size_t>(population));
    LogSum sum;
    detail::SisWeightIter it(population, lambda);
    for (;;) {
        logw[static_cast<std::size_t>(it.n() - 1)] = it.logw();
        sum.add(it.logw());
        if (!it.has_next()) break;
        it.advance();
    }
    const double log_norm = log_add(0.0, sum.log());  // log(1 + sum w)

    QuasiStationary q;
    q.population = population;
    q.lambda = lambda;
    q.pi.resize(static_cast<std::size_t>(population) + 1);
    q.pi_tilde.resize(static_cast<std::size_t>(population));
    q.pi[0] = std::exp(-log_norm);
    const double log_tail = sum.log() - log_norm;  // log(1 - pi0)
    for (std::int64_t n = 1; n <= population; ++n) {
        const double lw = logw[static_cast<std::size_t>(n - 1)];
        q.pi[static_cast<std::size_t>(n)] = std::exp(lw - log_norm);
        q.pi_tilde[static_cast<std::size_t>(n - 1)] = std::exp(lw - log_norm - log_tail);
    }
    return q;
}

// Mean epidemic duration from one infective: E[T] = sum_{n=1}^N w(n).
// For lambda > 1 the sum is evaluated through its Poisson-weight
// rearrangement  E[T] = (N-1)! (lambda/N)^{N-1} sum_j (N/lambda)^j/((N-j) j!),
// whose terms are concentrated near j ~ N/lambda; for lambda <= 1 the direct
// weight recurrence is used. Both routes are log-space stable and agree to
// rounding; keeping both gives an internal cross-check.
inline LogWeight sis_mean_duration_exact(std::int64_t population, double lambda) {
    if (population < 1) throw std::invalid_argument("sis_mean_duration_exact: N must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("sis_mean_duration_exact: lambda must be > 0");

    if (lambda > 1.0) {
        const double n = static_cast<double>(population);
        LogSum sum;
        for (std::int64_t j = 0; j < population; ++j) {
            const double jd = static_cast<double>(j);
            sum.add(jd * (std::log(n) - std::log(lambda)) - std::lgamma(jd + 1.0) -
                    std::log(n - jd));
        }
        return LogWeight::from_log(std::lgamma(n) + (n - 1.0) * (std::log(lambda) - std::log(n)) +
                                   sum.log());
    }

    LogSum sum;
    detail::SisWeightIter it(population, lambda);
    for (;;) {
        sum.add(it.logw());
        if (!it.has_next()) break;
        it.advance();
    }
    return sum.value();
}

// Mean total number of infectives over the epidemic:
// E[C] = sum_{n=1}^N (N-1)!/(N-n)! (lambda/N)^{n-1} = sum_n n w(n).
inline LogWeight sis_mean_progeny_exact(std::int64_t population, double lambda) {
    if (population < 1) throw std::invalid_argument("sis_mean_progeny_exact: N must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("sis_mean_progeny_exact: lambda must be > 0");
    LogSum sum;
    detail::SisWeightIter it(population, lambda);
    for (;;) {
        sum.add(it.logw() + std::log(static_cast<double>(it.n())));
        if (!it.has_next()) break;
        it.advance();
    }
    return sum.value();
}

// Large-N behaviour of E[T], regime selected by exact comparison of lambda
// with 1:
//   lambda < 1 :  -log(1-lambda)/lambda
//   lambda = 1 :  (1/2) log N
//   lambda > 1 :  sqrt(2 pi)/(lambda-1) * exp({log lambda - 1 + 1/lambda} N) / sqrt(N)
inline LogWeight sis_duration_asymptotic(std::int64_t population, double lambda) {
    if (population < 2) throw std::invalid_argument("sis_duration_asymptotic: N must be >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("sis_duration_asymptotic: lambda must be > 0");
    const double n = static_cast<double>(population);
    if (lambda < 1.0) return LogWeight::from_linear(-std::log1p(-lambda) / lambda);
    if (lambda == 1.0) return LogWeight::from_linear(0.5 * std::log(n));
    const double growth = std::log(lambda) - 1.0 + 1.0 / lambda;
    return LogWeight::from_log(0.5 * std::log(2.0 * M_PI) - std::log(lambda - 1.0) + growth * n -
                               0.5 * std::log(n));
}

// Large-N behaviour of E[C] for lambda > 1:
// sqrt(2 pi)/lambda * sqrt(N) * exp({log lambda - 1 + 1/lambda} N).
inline LogWeight sis_progeny_asymptotic(std::int64_t population, double lambda) {
    if (population < 2) throw std::invalid_argument("sis_progeny_asymptotic: N must be >= 2");
    if (!(lambda > 1.0))
        throw SubcriticalInput("sis_progeny_asymptotic: defined only for lambda > 1");
    const double n = static_cast<double>(population);
    const double growth = std::log(lambda) - 1.0 + 1.0 / lambda;
    return LogWeight::from_log(0.5 * std::log(2.0 * M_PI) - std::log(lambda) + growth * n +
                               0.5 * std::log(n));
}

// ---------------------------------------------------------------------------
// Extinction probability of the lifetime-Q branching process
// ---------------------------------------------------------------------------

struct ExtinctionSolution {
    double p_q = 1.0;
    std::int64_t iterations = 0;
    double residual = 0.0;  // |p - L(lambda (1 - p))|
};

// Minimal fixed point of p = L_Q(lambda (1-p)): an individual with lifetime
// Q and Poisson(lambda) birth rate leaves Poisson(lambda Q) offspring, so
// the offspring pgf at p is E[exp(-lambda(1-p) Q)]. Monotone iteration from
// p = 0 converges to the extinction probability; subcritical and critical
// cases return 1 without iterating.
inline ExtinctionSolution extinction_probability(const LifetimeDistribution& dist, double lambda,
                                                 double tol = 1e-13, std::int64_t max_iter = 100000) {
    if (!(lambda > 0.0)) throw std::invalid_argument("extinction_probability: lambda must be > 0");
    if (lambda <= 1.0) return {1.0, 0, 0.0};
    double p = 0.0;
    for (std::int64_t i = 1; i <= max_iter; ++i) {
        const double next = dist.laplace(lambda * (1.0 - p));
        const double delta = std::fabs(next - p);
        p = next;
        if (delta < tol) {
            return {p, i, std::fabs(p - dist.laplace(lambda * (1.0 - p)))};
        }
    }
    throw NonConvergence("extinction_probability: no convergence within " +
                         std::to_string(max_iter) + " iterations (lambda near 1?)");
}

// Leading-order mean extinction time from the quasi-endemic level:
// E[T_Q] ~ E[T] / (1 - p_Q). This is the asymptotic-in-N expression; no
// finite-N correction is applied.
inline LogWeight endemic_extinction_mean(std::int64_t population, double lambda,
                                         const LifetimeDistribution& dist) {
    if (!(lambda > 1.0))
        throw SubcriticalInput("endemic_extinction_mean: defined only for lambda > 1");
    const ExtinctionSolution sol = extinction_probability(dist, lambda);
    const LogWeight mu = sis_mean_duration_exact(population, lambda);
    return LogWeight::from_log(mu.log_value - std::log1p(-sol.p_q));
}

// ---------------------------------------------------------------------------
// Household SIS
// ---------------------------------------------------------------------------

// Mean severity of a within-household epidemic started by one infective and
// free of outside infection: sum_{n=1}^h (h-1)!/(h-n)! lambda_L^{n-1}.
// (A household on its own is a homogeneous SIS epidemic with N = h and
// per-pair rate lambda_L.) Plain accumulation: exact at small h, and once
// the sum overflows the log-space value would be inf as a double anyway.
inline double household_severity_mean(std::int64_t household_size, double lambda_local) {
    if (household_size < 1) throw std::invalid_argument("household_severity_mean: h must be >= 1");
    if (!(lambda_local >= 0.0)) throw std::invalid_argument("household_severity_mean: lambda_L must be >= 0");
    double term = 1.0;
    double sum = 1.0;
    for (std::int64_t n = 1; n < household_size; ++n) {
        term *= static_cast<double>(household_size - n) * lambda_local;
        sum += term;
        if (term == 0.0) break;
    }
    return sum;
}

// Household reproduction number R* = lambda_G * E[S].
inline double household_rstar(std::int64_t household_size, double lambda_global, double lambda_local) {
    if (!(lambda_global >= 0.0)) throw std::invalid_argument("household_rstar: lambda_G must be >= 0");
    return lambda_global * household_severity_mean(household_size, lambda_local);
}

// Stationary distribution (phi_0 .. phi_h) of the number infected in a
// household of size h exposed to a constant per-person global force
// s * lambda_G on its susceptibles:
//   phi_k = phi_{k-1} (h+1-k)(lambda_G s + (k-1) lambda_L) / k,
// normalized to sum 1. Note s enters as the *proportion* of the whole
// population infected.
inline std::vector<double> household_phi(std::int64_t household_size, double lambda_global,
                                         double lambda_local, double field) {
    if (household_size < 1) throw std::invalid_argument("household_phi: h must be >= 1");
    if (!(field >= 0.0)) throw std::invalid_argument("household_phi: s must be >= 0");
    std::vector<double> logc(static_cast<std::size_t>(household_size) + 1);
    LogSum norm;
    double logp = 0.0;
    norm.add(0.0);
    logc[0] = 0.0;
    for (std::int64_t k = 1; k <= household_size; ++k) {
        const double factor = static_cast<double>(household_size + 1 - k) *
                              (lambda_global * field + static_cast<double>(k - 1) * lambda_local) /
                              static_cast<double>(k);
        if (factor == 0.0) {
            for (std::int64_t j = k; j <= household_size; ++j)
                logc[static_cast<std::size_t>(j)] = -std::numeric_limits<double>::infinity();
            break;
        }
        logp += std::log(factor);
        logc[static_cast<std::size_t>(k)] = logp;
        norm.add(logp);
    }
    std::vector<double> phi(logc.size());
    for (std::size_t i = 0; i < logc.size(); ++i) phi[i] = std::exp(logc[i] - norm.log());
    return phi;
}

struct HouseholdEquilibrium {
    std::int64_t household_size = 1;
    double lambda_local = 0.0;
    double lambda_global = 0.0;
    double r_star = 0.0;
    double z = 0.0;               // mean infectives per household at equilibrium
    std::vector<double> phi;      // household-size distribution at the equilibrium field
    double proportion() const { return z / static_cast<double>(household_size); }
};

namespace detail {

inline double household_phi_mean(std::int64_t h, double lg, double ll, double field) {
    const std::vector<double> phi = household_phi(h, lg, ll, field);
    double mean = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) mean += static_cast<double>(i) * phi[i];
    return mean;
}

}  // namespace detail

// Endemic equilibrium of the many-household limit. z is the per-household
// mean number infected, the unique root of
//     z = sum_i i phi_i(z / h)
// on (0, h] when R* > 1 (phi's field argument is the population proportion
// z/h; a self-consistent field must reproduce its own household mean).
// Found by bisection on (1e-12, h], 200 iterations, tolerance 1e-12.
// Below threshold (R* <= 1) the equilibrium is extinction: z = 0.
inline HouseholdEquilibrium household_endemic(std::int64_t household_size, double lambda_global,
                                              double lambda_local) {
    HouseholdEquilibrium eq;
    eq.household_size = household_size;
    eq.lambda_local = lambda_local;
    eq.lambda_global = lambda_global;
    eq.r_star = household_rstar(household_size, lambda_global, lambda_local);
    if (eq.r_star <= 1.0) {
        eq.z = 0.0;
        eq.phi = household_phi(household_size, lambda_global, lambda_local, 0.0);
        return eq;
    }

    const double h = static_cast<double>(household_size);
    const auto g = [&](double z) {
        return detail::household_phi_mean(household_size, lambda_global, lambda_local, z / h) - z;
    };
    double lo = 1e-12;
    double hi = h;
    if (!(g(lo) > 0.0) || !(g(hi) < 0.0))
        throw BracketFailure("household_endemic: g(z) does not change sign on (1e-12, h]");
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    eq.z = 0.5 * (lo + hi);
    eq.phi = household_phi(household_size, lambda_global, lambda_local, eq.z / h);
    return eq;
}

}  // namespace bdkit

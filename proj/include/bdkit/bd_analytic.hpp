#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bdkit/birth_rate.hpp"
#include "bdkit/errors.hpp"
#include "bdkit/log_weight.hpp"

namespace bdkit {

// Exact mean quantities of the birth-death type process with regeneration
// rate alpha(0) = 1:
//   w(n)  = prod_{i=0}^{n-1} alpha(i)/(i+1)   (w(1) = 1)
//   pi(0) = 1 / (1 + sum_n w(n))
//   E[T]  = sum_n w(n) = 1/pi(0) - 1
//   E[A_n] = w(n)
//   E[C] = E[S] = sum_n n w(n)
// All sums are carried in log space: for supercritical SIS they reach
// exp(c N) scale.
struct AnalyticSummary {
    std::vector<LogWeight> weights;  // weights[i] = w(i+1)
    double pi0 = 1.0;
    double log_normalizer = 0.0;     // log(1 + sum w) = -log pi(0)
    LogWeight mean_duration;
    LogWeight mean_progeny;
    bool truncated = false;

    // E[A_n] = w(n); zero beyond the computed range.
    LogWeight weight(std::int64_t n) const {
        if (n < 1 || n > static_cast<std::int64_t>(weights.size())) return LogWeight::zero();
        return weights[static_cast<std::size_t>(n - 1)];
    }

    // Stationary probability pi(n) of the regenerative process, n >= 0.
    double pi(std::int64_t n) const {
        if (n == 0) return pi0;
        return std::exp(weight(n).log_value - log_normalizer);
    }

    std::int64_t max_state() const { return static_cast<std::int64_t>(weights.size()); }
};

// Computes the weight vector and its sums up to n_max (bounded models stop
// at their state bound if that comes first). For unbounded models the tail
// is cut once it is provably below 1e-15 relative: the last ratio
// r = alpha(n)/(n+1) must be < 1 and the geometric bound w_next/(1-r) must
// be below 1e-15 of both running sums. If an unbounded model reaches n_max
// without the rule firing, the series is treated as divergent (branching
// with lambda >= 1 lands here).
inline AnalyticSummary stationary_weights(const BirthRateModel& model, std::int64_t n_max) {
    if (n_max < 1) throw std::invalid_argument("stationary_weights: n_max must be >= 1");

    const auto bound = model.state_bound();
    const bool bounded = bound.has_value();
    std::int64_t limit = n_max;
    if (bounded && *bound < limit) limit = *bound;

    AnalyticSummary out;
    out.weights.reserve(static_cast<std::size_t>(limit < 4096 ? limit : 4096));

    LogSum sum_t;   // sum w(n)
    LogSum sum_c;   // sum n w(n)
    double logw = 0.0;  // log w(1)
    bool fired = false;

    for (std::int64_t n = 1;; ++n) {
        out.weights.push_back(LogWeight::from_log(logw));
        sum_t.add(logw);
        sum_c.add(logw + std::log(static_cast<double>(n)));
        if (n == limit) break;

        const double alpha = model.birth_rate(n);
        const double ratio = alpha / static_cast<double>(n + 1);
        const double logw_next = logw + std::log(ratio);  // -inf when alpha = 0

        if (std::isinf(logw_next) && logw_next < 0.0) break;  // exact zero tail: complete

        if (ratio < 1.0) {
            const double log_tail_bound = logw_next - std::log1p(-ratio);
            const double log_eps = std::log(1e-15);
            const double log_n1 = std::log(static_cast<double>(n + 1));
            if (log_tail_bound < log_eps + sum_t.log() &&
                log_tail_bound + log_n1 < log_eps + sum_c.log()) {
                fired = true;
                break;
            }
        }
        logw = logw_next;
    }

    if (!fired && !bounded && static_cast<std::int64_t>(out.weights.size()) == n_max) {
        throw DivergentSeries("stationary weight series did not settle within n_max=" +
                              std::to_string(n_max) + " for " + model.label() +
                              "; the regenerative process is not positive recurrent "
                              "or n_max is too small");
    }

    // A bounded model cut short by the caller's n_max also counts as cut.
    out.truncated = fired || (bounded && limit < *bound &&
                              model.birth_rate(limit) > 0.0 && !out.weights.empty() &&
                              !out.weights.back().is_zero());
    out.mean_duration = sum_t.value();
    out.mean_progeny = sum_c.value();
    out.log_normalizer = log_add(0.0, sum_t.log());
    out.pi0 = std::exp(-out.log_normalizer);
    return out;
}

// E[T], the mean time to extinction from a single individual.
inline LogWeight mean_duration(const BirthRateModel& model, std::int64_t n_max) {
    return stationary_weights(model, n_max).mean_duration;
}

// E[A_n], the mean total time spent with exactly n individuals alive.
// Direct product; defined for every n (zero past a bound or an alpha gap).
inline LogWeight mean_occupation(const BirthRateModel& model, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("mean_occupation: n must be >= 1");
    double logw = 0.0;
    for (std::int64_t i = 1; i < n; ++i) {
        const double alpha = model.birth_rate(i);
        if (alpha == 0.0) return LogWeight::zero();
        logw += std::log(alpha) - std::log(static_cast<double>(i + 1));
    }
    return LogWeight::from_log(logw);
}

// E[C] = E[S], the mean number of individuals ever alive (equivalently the
// mean sum of their lifetimes).
inline LogWeight mean_progeny(const BirthRateModel& model, std::int64_t n_max) {
    return stationary_weights(model, n_max).mean_progeny;
}

// Branching-process occupation: E[A_n] = lambda^{n-1} / (n max(1,lambda)^n),
// valid in all criticality regimes; reduces to 1/(lambda n) for lambda >= 1.
inline double branching_occupation(double lambda, std::int64_t n) {
    if (!(lambda > 0.0)) throw std::invalid_argument("branching_occupation: lambda must be > 0");
    if (n < 1) throw std::invalid_argument("branching_occupation: n must be >= 1");
    const double nn = static_cast<double>(n);
    if (lambda >= 1.0) return 1.0 / (lambda * nn);
    return std::pow(lambda, static_cast<double>(n - 1)) / nn;
}

// Mean duration -log(1-lambda)/lambda of the subcritical branching process.
inline double branching_duration(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("branching_duration: lambda must be > 0");
    if (lambda >= 1.0)
        throw SupercriticalInput("branching_duration: mean duration is infinite for lambda >= 1");
    return -std::log1p(-lambda) / lambda;
}

// Mean total progeny 1/(1-lambda) of the subcritical branching process.
inline double branching_progeny(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("branching_progeny: lambda must be > 0");
    if (lambda >= 1.0)
        throw SupercriticalInput("branching_progeny: mean total progeny is infinite for lambda >= 1");
    return 1.0 / (1.0 - lambda);
}

}  // namespace bdkit

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bdkit/engine.hpp"
#include "bdkit/errors.hpp"

namespace bdkit {

namespace detail {

// Acklam's rational approximation to the standard normal quantile
// (relative error below 1.15e-9, ample for confidence intervals).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double pl = 0.02425;
    double q, r;
    if (p < pl) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - pl) {
        q = p - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace detail

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(n)
    std::int64_t n_reps = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::int64_t n_budget_exceeded = 0;
};

struct ComparisonVerdict {
    MCEstimate estimate;
    double target = 0.0;
    double z_score = 0.0;
    bool pass = false;
    double threshold = 4.0;
};

enum class Quantity { Duration, Progeny, Severity, Occupation, ExtinctFraction, HitFraction };

struct QuantitySpec {
    Quantity kind = Quantity::Duration;
    std::int64_t level = 0;  // n for Occupation, level for HitFraction

    static QuantitySpec duration() { return {Quantity::Duration, 0}; }
    static QuantitySpec progeny() { return {Quantity::Progeny, 0}; }
    static QuantitySpec severity() { return {Quantity::Severity, 0}; }
    static QuantitySpec occupation(std::int64_t n) { return {Quantity::Occupation, n}; }
    static QuantitySpec extinct_fraction() { return {Quantity::ExtinctFraction, 0}; }
    static QuantitySpec hit_fraction(std::int64_t level) { return {Quantity::HitFraction, level}; }

    double of(const SimulationRecord& rec) const {
        switch (kind) {
            case Quantity::Duration: return rec.duration;
            case Quantity::Progeny: return static_cast<double>(rec.progeny);
            case Quantity::Severity: return rec.severity;
            case Quantity::Occupation: return rec.occupation_at(level);
            case Quantity::ExtinctFraction: return rec.outcome == Outcome::Extinct ? 1.0 : 0.0;
            case Quantity::HitFraction: return rec.hit(level) ? 1.0 : 0.0;
        }
        return 0.0;
    }

    double of(const HouseholdRecord& rec) const {
        switch (kind) {
            case Quantity::Duration: return rec.duration;
            case Quantity::Progeny: return static_cast<double>(rec.progeny);
            case Quantity::Severity: return rec.severity;
            case Quantity::ExtinctFraction: return rec.outcome == Outcome::Extinct ? 1.0 : 0.0;
            default:
                throw std::invalid_argument("QuantitySpec: unsupported quantity for household records");
        }
    }

    std::string label() const {
        switch (kind) {
            case Quantity::Duration: return "T";
            case Quantity::Progeny: return "C";
            case Quantity::Severity: return "S";
            case Quantity::Occupation: return "A:" + std::to_string(level);
            case Quantity::ExtinctFraction: return "extinct";
            case Quantity::HitFraction: return "hit:" + std::to_string(level);
        }
        return "?";
    }
};

struct HarnessConfig {
    int workers = 0;  // 0 = hardware concurrency
    double ci_level = 0.95;
    double budget_fail_fraction = 0.001;  // tolerated share of BudgetExceeded replicates
    std::uint64_t stream_offset = 0;      // replicate i uses stream index offset + i
    EngineConfig engine;
};

namespace detail {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs replicate bodies over a shared atomic index; per-quantity values are
// stored by replicate index so the aggregation never depends on which
// worker ran what. NaN slots mark replicates that blew the event budget.
inline std::vector<MCEstimate> run_replicates(
    std::size_t n_quantities, std::int64_t n_reps, const HarnessConfig& cfg,
    const std::function<void(std::int64_t, double*)>& body) {
    if (n_reps < 2) throw std::invalid_argument("estimate: n_reps must be >= 2");

    std::vector<std::vector<double>> values(n_quantities);
    for (auto& v : values) v.assign(static_cast<std::size_t>(n_reps), 0.0);
    std::atomic<std::int64_t> next{0};
    std::atomic<std::int64_t> budget_hits{0};

    const int workers = resolve_workers(cfg.workers);
    auto work = [&]() {
        std::vector<double> scratch(n_quantities, 0.0);
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_reps) break;
            try {
                body(i, scratch.data());
                for (std::size_t q = 0; q < n_quantities; ++q)
                    values[q][static_cast<std::size_t>(i)] = scratch[q];
            } catch (const BudgetExceeded&) {
                budget_hits.fetch_add(1, std::memory_order_relaxed);
                for (std::size_t q = 0; q < n_quantities; ++q)
                    values[q][static_cast<std::size_t>(i)] = std::numeric_limits<double>::quiet_NaN();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    const std::int64_t exceeded = budget_hits.load();
    if (static_cast<double>(exceeded) >= cfg.budget_fail_fraction * static_cast<double>(n_reps) &&
        exceeded > 0)
        throw BudgetExceeded("estimate: " + std::to_string(exceeded) + " of " +
                             std::to_string(n_reps) + " replicates exceeded the event budget");

    const double zq = normal_quantile(0.5 * (1.0 + cfg.ci_level));
    std::vector<MCEstimate> out(n_quantities);
    for (std::size_t q = 0; q < n_quantities; ++q) {
        double sum = 0.0;
        std::int64_t n = 0;
        for (double v : values[q])
            if (!std::isnan(v)) {
                sum += v;
                ++n;
            }
        MCEstimate e;
        e.n_reps = n;
        e.n_budget_exceeded = exceeded;
        e.mean = n > 0 ? sum / static_cast<double>(n) : 0.0;
        double ss = 0.0;
        for (double v : values[q])
            if (!std::isnan(v)) {
                const double d = v - e.mean;
                ss += d * d;
            }
        e.std_error = n > 1 ? std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n))) : 0.0;
        e.ci_low = e.mean - zq * e.std_error;
        e.ci_high = e.mean + zq * e.std_error;
        out[q] = e;
    }
    return out;
}

}  // namespace detail

// Monte Carlo estimates of several quantities from one shared set of
// replicates. Replicate i always uses stream (master_seed, offset + i).
inline std::vector<MCEstimate> estimate_many(const std::vector<QuantitySpec>& quantities,
                                             const BirthRateModel& model,
                                             const LifetimeDistribution& dist,
                                             const InitialCondition& init, const StopRule& stop,
                                             std::int64_t n_reps, std::uint64_t master_seed,
                                             const HarnessConfig& cfg = {}) {
    return detail::run_replicates(
        quantities.size(), n_reps, cfg, [&](std::int64_t i, double* out) {
            RandomStream rng(master_seed, cfg.stream_offset + static_cast<std::uint64_t>(i));
            const SimulationRecord rec = simulate(model, dist, init, stop, rng, cfg.engine);
            for (std::size_t q = 0; q < quantities.size(); ++q) out[q] = quantities[q].of(rec);
        });
}

inline MCEstimate estimate(const QuantitySpec& quantity, const BirthRateModel& model,
                           const LifetimeDistribution& dist, const InitialCondition& init,
                           const StopRule& stop, std::int64_t n_reps, std::uint64_t master_seed,
                           const HarnessConfig& cfg = {}) {
    return estimate_many({quantity}, model, dist, init, stop, n_reps, master_seed, cfg)[0];
}

inline std::vector<MCEstimate> estimate_household_many(
    const std::vector<QuantitySpec>& quantities, const HouseholdConfig& hcfg,
    const LifetimeDistribution& dist, const HouseholdInit& init, const StopRule& stop,
    std::int64_t n_reps, std::uint64_t master_seed, const HarnessConfig& cfg = {}) {
    return detail::run_replicates(
        quantities.size(), n_reps, cfg, [&](std::int64_t i, double* out) {
            RandomStream rng(master_seed, cfg.stream_offset + static_cast<std::uint64_t>(i));
            const HouseholdRecord rec = simulate_household(hcfg, dist, init, stop, rng, cfg.engine);
            for (std::size_t q = 0; q < quantities.size(); ++q) out[q] = quantities[q].of(rec);
        });
}

inline MCEstimate estimate_household(const QuantitySpec& quantity, const HouseholdConfig& hcfg,
                                     const LifetimeDistribution& dist, const HouseholdInit& init,
                                     const StopRule& stop, std::int64_t n_reps,
                                     std::uint64_t master_seed, const HarnessConfig& cfg = {}) {
    return estimate_household_many({quantity}, hcfg, dist, init, stop, n_reps, master_seed, cfg)[0];
}

// z-test of an MC estimate against an analytic target.
inline ComparisonVerdict compare(const MCEstimate& estimate, double target, double threshold = 4.0) {
    ComparisonVerdict v;
    v.estimate = estimate;
    v.target = target;
    v.threshold = threshold;
    if (estimate.std_error == 0.0) {
        if (estimate.mean == target) {
            v.z_score = 0.0;
            v.pass = true;
            return v;
        }
        throw DegenerateEstimate("compare: zero standard error with mean != target");
    }
    v.z_score = (estimate.mean - target) / estimate.std_error;
    v.pass = std::fabs(v.z_score) <= threshold;
    return v;
}

struct InsensitivityEntry {
    std::string dist;
    MCEstimate estimate;
    ComparisonVerdict verdict;
};

struct OverlapCheck {
    std::size_t i = 0;
    std::size_t j = 0;
    double z = 0.0;
    bool pass = false;
};

// Per-distribution verdicts against one analytic target plus all-pairs
// overlap checks |m_i - m_j| <= threshold * sqrt(se_i^2 + se_j^2).
struct InsensitivityReport {
    std::string quantity;
    std::string model;
    double target = 0.0;
    double threshold = 4.0;
    std::vector<InsensitivityEntry> entries;
    std::vector<OverlapCheck> overlaps;
    bool targets_pass = false;
    bool overlaps_pass = false;
    bool all_pass = false;
};

inline InsensitivityReport insensitivity_report(const QuantitySpec& quantity,
                                                const BirthRateModel& model,
                                                const std::vector<LifetimeDistribution>& dists,
                                                const InitialCondition& init, const StopRule& stop,
                                                std::int64_t n_reps, std::uint64_t master_seed,
                                                double target, double threshold = 4.0,
                                                HarnessConfig cfg = {}) {
    if (dists.size() < 2)
        throw std::invalid_argument("insensitivity_report: need at least 2 distributions");

    InsensitivityReport rep;
    rep.quantity = quantity.label();
    rep.model = model.label();
    rep.target = target;
    rep.threshold = threshold;

    for (std::size_t d = 0; d < dists.size(); ++d) {
        // disjoint stream ranges keep the per-distribution runs independent
        cfg.stream_offset = static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(n_reps);
        InsensitivityEntry entry;
        entry.dist = dists[d].label();
        entry.estimate = estimate(quantity, model, dists[d], init, stop, n_reps, master_seed, cfg);
        entry.verdict = compare(entry.estimate, target, threshold);
        rep.entries.push_back(std::move(entry));
    }

    rep.targets_pass = true;
    for (const auto& e : rep.entries) rep.targets_pass = rep.targets_pass && e.verdict.pass;

    rep.overlaps_pass = true;
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.entries.size(); ++j) {
            const auto& a = rep.entries[i].estimate;
            const auto& b = rep.entries[j].estimate;
            OverlapCheck oc;
            oc.i = i;
            oc.j = j;
            const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
            oc.z = se > 0.0 ? (a.mean - b.mean) / se : (a.mean == b.mean ? 0.0 : INFINITY);
            oc.pass = std::fabs(oc.z) <= threshold;
            rep.overlaps.push_back(oc);
            rep.overlaps_pass = rep.overlaps_pass && oc.pass;
        }
    }
    rep.all_pass = rep.targets_pass && rep.overlaps_pass;
    return rep;
}

}  // namespace bdkit

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdkit/birth_rate.hpp"
#include "bdkit/errors.hpp"
#include "bdkit/lifetimes.hpp"
#include "bdkit/rng.hpp"

namespace bdkit {

enum class Outcome { Extinct, CapHit, LevelHit, HorizonEnd };

inline const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Extinct: return "extinct";
        case Outcome::CapHit: return "cap";
        case Outcome::LevelHit: return "level";
        case Outcome::HorizonEnd: return "horizon";
    }
    return "?";
}

enum class ResidualMode { FreshQ, EquilibriumResidual };

// How to seed the population. EndemicLevel places floor((lambda-1)N/lambda)
// infectives (SIS, lambda > 1 only); the residuals mode decides whether the
// initial individuals carry fresh lifetimes or equilibrium excess lives.
class InitialCondition {
public:
    enum class Mode { SingleIndividual, EndemicLevel, Count };

    static InitialCondition single() { return InitialCondition(Mode::SingleIndividual, 1, ResidualMode::FreshQ); }

    static InitialCondition endemic_level(ResidualMode residuals = ResidualMode::EquilibriumResidual) {
        return InitialCondition(Mode::EndemicLevel, 0, residuals);
    }

    static InitialCondition count(std::int64_t k, ResidualMode residuals = ResidualMode::FreshQ) {
        if (k < 1) throw std::invalid_argument("InitialCondition::count: k must be >= 1");
        return InitialCondition(Mode::Count, k, residuals);
    }

    Mode mode() const { return mode_; }
    ResidualMode residuals() const { return residuals_; }

    // Number of initial individuals for a concrete model.
    std::int64_t resolve(const BirthRateModel& model) const {
        switch (mode_) {
            case Mode::SingleIndividual: return 1;
            case Mode::Count: return count_;
            case Mode::EndemicLevel: {
                if (model.family() != ModelFamily::SIS || !(model.lambda() > 1.0))
                    throw std::invalid_argument(
                        "InitialCondition::endemic_level requires a SIS model with lambda > 1");
                const double lambda = model.lambda();
                const auto level = static_cast<std::int64_t>(
                    std::floor((lambda - 1.0) * static_cast<double>(model.population()) / lambda));
                if (level < 1)
                    throw std::invalid_argument(
                        "InitialCondition::endemic_level: endemic level floor((lambda-1)N/lambda) is zero");
                return level;
            }
        }
        return 1;
    }

    std::string label() const {
        switch (mode_) {
            case Mode::SingleIndividual: return "single";
            case Mode::EndemicLevel:
                return residuals_ == ResidualMode::EquilibriumResidual ? "endemic/residual" : "endemic/fresh";
            case Mode::Count:
                return "count:" + std::to_string(count_) +
                       (residuals_ == ResidualMode::EquilibriumResidual ? "/residual" : "/fresh");
        }
        return "?";
    }

private:
    InitialCondition(Mode mode, std::int64_t count, ResidualMode residuals)
        : mode_(mode), count_(count), residuals_(residuals) {}

    Mode mode_;
    std::int64_t count_;
    ResidualMode residuals_;
};

// First-trigger-wins set of stopping conditions. Extinction always stops a
// run (state 0 is absorbing here); a population cap, hitting levels and a
// time horizon can be added on top.
class StopRule {
public:
    static StopRule extinction() { return StopRule(); }

    static StopRule extinction_or_cap(std::int64_t cap) { return StopRule().with_cap(cap); }

    static StopRule hitting_level(std::int64_t level) { return StopRule().with_level(level); }

    static StopRule time_horizon(double t) { return StopRule().with_horizon(t); }

    StopRule& with_cap(std::int64_t cap) {
        if (cap < 1) throw std::invalid_argument("StopRule: cap must be >= 1");
        cap_ = cap;
        return *this;
    }

    StopRule& with_level(std::int64_t level) {
        if (level < 0) throw std::invalid_argument("StopRule: level must be >= 0");
        levels_.push_back(level);
        std::sort(levels_.begin(), levels_.end());
        return *this;
    }

    StopRule& with_horizon(double t) {
        if (!(t > 0.0)) throw std::invalid_argument("StopRule: horizon must be > 0");
        horizon_ = t;
        return *this;
    }

    std::optional<std::int64_t> cap() const { return cap_; }
    const std::vector<std::int64_t>& levels() const { return levels_; }
    std::optional<double> horizon() const { return horizon_; }

    bool is_level(std::int64_t n) const {
        return std::binary_search(levels_.begin(), levels_.end(), n);
    }

    void validate(std::int64_t initial_count) const {
        if (cap_ && *cap_ <= initial_count)
            throw std::invalid_argument("StopRule: cap must exceed the initial count");
    }

    std::string label() const {
        std::string s = "extinction";
        if (cap_) s += "|cap:" + std::to_string(*cap_);
        for (auto l : levels_) s += "|level:" + std::to_string(l);
        if (horizon_) s += "|horizon:" + std::to_string(*horizon_);
        return s;
    }

private:
    std::optional<std::int64_t> cap_;
    std::vector<std::int64_t> levels_;
    std::optional<double> horizon_;
};

struct EngineConfig {
    std::int64_t event_budget = 10'000'000'000LL;  // births + deaths per replicate
};

// One replicate's outcome. occupation[n] is the time spent with exactly n
// alive (entries exist up to the highest visited state); severity is the
// lifetime consumed, i.e. the integral of the population size over the run,
// which at extinction equals the sum of all sampled lifetimes.
struct SimulationRecord {
    double duration = 0.0;
    std::int64_t progeny = 0;
    double severity = 0.0;
    double lifetime_sum = 0.0;  // total lifetime handed out (initial + births)
    std::vector<double> occupation;
    std::map<std::int64_t, double> hitting_times;
    Outcome outcome = Outcome::Extinct;
    std::int64_t final_state = 0;
    std::int64_t events = 0;

    double occupation_at(std::int64_t n) const {
        if (n < 0 || n >= static_cast<std::int64_t>(occupation.size())) return 0.0;
        return occupation[static_cast<std::size_t>(n)];
    }

    bool hit(std::int64_t level) const { return hitting_times.count(level) > 0; }
};

namespace detail {

using MinHeap = std::priority_queue<double, std::vector<double>, std::greater<double>>;

inline void accrue(std::vector<double>& occ, std::int64_t n, double dt) {
    if (n >= static_cast<std::int64_t>(occ.size())) occ.resize(static_cast<std::size_t>(n) + 1, 0.0);
    occ[static_cast<std::size_t>(n)] += dt;
}

}  // namespace detail

// Exact event-driven realization of the birth-death type process. Deaths
// live in a min-heap of absolute times; the next birth is an exponential
// with rate alpha(n), redrawn after every event (valid because the birth
// stream is Poisson with a rate depending only on n). Each birth gets a
// fresh lifetime from dist.
inline SimulationRecord simulate(const BirthRateModel& model, const LifetimeDistribution& dist,
                                 const InitialCondition& init, const StopRule& stop,
                                 RandomStream& rng, const EngineConfig& cfg = {}) {
    const std::int64_t k0 = init.resolve(model);
    stop.validate(k0);

    SimulationRecord rec;
    rec.progeny = k0;
    rec.occupation.reserve(64);

    detail::MinHeap deaths;
    for (std::int64_t i = 0; i < k0; ++i) {
        const double life = init.residuals() == ResidualMode::EquilibriumResidual
                                ? dist.sample_residual(rng)
                                : dist.sample(rng);
        rec.lifetime_sum += life;
        deaths.push(life);
    }

    double t = 0.0;
    std::int64_t n = k0;
    const double horizon = stop.horizon().value_or(std::numeric_limits<double>::infinity());

    if (stop.is_level(n)) {  // already at a requested level at time zero
        rec.hitting_times[n] = 0.0;
        rec.outcome = Outcome::LevelHit;
        rec.final_state = n;
        return rec;
    }

    double alpha = model.birth_rate(n);
    double next_birth = alpha > 0.0 ? t + rng.exponential(alpha) : std::numeric_limits<double>::infinity();

    for (;;) {
        const double t_death = deaths.top();
        const bool is_birth = next_birth < t_death;
        const double t_next = is_birth ? next_birth : t_death;

        if (t_next >= horizon) {
            detail::accrue(rec.occupation, n, horizon - t);
            rec.severity += static_cast<double>(n) * (horizon - t);
            t = horizon;
            rec.outcome = Outcome::HorizonEnd;
            break;
        }

        detail::accrue(rec.occupation, n, t_next - t);
        rec.severity += static_cast<double>(n) * (t_next - t);
        t = t_next;

        if (++rec.events > cfg.event_budget)
            throw BudgetExceeded("simulate: event budget exceeded (" +
                                 std::to_string(cfg.event_budget) + ")");

        if (is_birth) {
            ++n;
            ++rec.progeny;
            const double life = dist.sample(rng);
            rec.lifetime_sum += life;
            deaths.push(t + life);
            if (stop.is_level(n)) {
                rec.hitting_times[n] = t;
                rec.outcome = Outcome::LevelHit;
                break;
            }
            if (stop.cap() && n >= *stop.cap()) {
                rec.outcome = Outcome::CapHit;
                break;
            }
        } else {
            deaths.pop();
            --n;
            if (n == 0) {
                rec.outcome = Outcome::Extinct;
                break;
            }
            if (stop.is_level(n)) {
                rec.hitting_times[n] = t;
                rec.outcome = Outcome::LevelHit;
                break;
            }
        }

        alpha = model.birth_rate(n);
        next_birth = alpha > 0.0 ? t + rng.exponential(alpha) : std::numeric_limits<double>::infinity();
    }

    rec.duration = t;
    rec.final_state = n;
    return rec;
}

// Long-run occupancy of the regenerative process (alpha(0) = 1: the process
// waits a mean-1 exponential in state 0, then restarts from one fresh
// individual). Returns the fraction of [0, t_horizon] spent in each state.
inline std::vector<double> simulate_regenerative(const BirthRateModel& model,
                                                 const LifetimeDistribution& dist, double t_horizon,
                                                 RandomStream& rng, const EngineConfig& cfg = {}) {
    if (!(t_horizon > 0.0)) throw std::invalid_argument("simulate_regenerative: horizon must be > 0");

    std::vector<double> occ;
    occ.reserve(64);
    detail::MinHeap deaths;
    double t = 0.0;
    std::int64_t n = 0;
    std::int64_t events = 0;

    double alpha = 1.0;  // regeneration rate in state 0
    double next_birth = t + rng.exponential(alpha);

    for (;;) {
        const double t_death = deaths.empty() ? std::numeric_limits<double>::infinity() : deaths.top();
        const bool is_birth = next_birth < t_death;
        const double t_next = is_birth ? next_birth : t_death;

        if (t_next >= t_horizon) {
            detail::accrue(occ, n, t_horizon - t);
            break;
        }
        detail::accrue(occ, n, t_next - t);
        t = t_next;

        if (++events > cfg.event_budget)
            throw BudgetExceeded("simulate_regenerative: event budget exceeded");

        if (is_birth) {
            ++n;
            deaths.push(t + dist.sample(rng));
        } else {
            deaths.pop();
            --n;
        }
        alpha = n == 0 ? 1.0 : model.birth_rate(n);
        next_birth = alpha > 0.0 ? t + rng.exponential(alpha) : std::numeric_limits<double>::infinity();
    }

    for (auto& v : occ) v /= t_horizon;
    return occ;
}

// ---------------------------------------------------------------------------
// Household SIS simulator
// ---------------------------------------------------------------------------

struct HouseholdConfig {
    std::int64_t households = 1;      // m
    std::int64_t household_size = 1;  // h
    double lambda_global = 0.0;
    double lambda_local = 0.0;
    double burn_in = 0.0;  // class/prevalence time-averages accumulate after this time
};

class HouseholdInit {
public:
    enum class Mode { OneInfective, Prevalence };

    static HouseholdInit one_infective() { return HouseholdInit(Mode::OneInfective, 0.0, ResidualMode::FreshQ); }

    static HouseholdInit prevalence(double p0,
                                    ResidualMode residuals = ResidualMode::EquilibriumResidual) {
        if (!(p0 >= 0.0 && p0 <= 1.0))
            throw std::invalid_argument("HouseholdInit::prevalence: p0 must be in [0, 1]");
        return HouseholdInit(Mode::Prevalence, p0, residuals);
    }

    Mode mode() const { return mode_; }
    double p0() const { return p0_; }
    ResidualMode residuals() const { return residuals_; }

    std::string label() const {
        return mode_ == Mode::OneInfective ? "one" : "prevalence:" + std::to_string(p0_);
    }

private:
    HouseholdInit(Mode mode, double p0, ResidualMode residuals)
        : mode_(mode), p0_(p0), residuals_(residuals) {}

    Mode mode_;
    double p0_;
    ResidualMode residuals_;
};

struct HouseholdRecord {
    double duration = 0.0;
    std::int64_t progeny = 0;
    double severity = 0.0;      // integral of the infective count from time 0
    double lifetime_sum = 0.0;
    std::vector<double> class_time;  // post-burn-in time with n infectives per household, n=0..h
    double window = 0.0;             // post-burn-in elapsed time
    Outcome outcome = Outcome::Extinct;
    std::int64_t final_infectives = 0;
    std::int64_t events = 0;
    std::int64_t households = 0;
    std::int64_t household_size = 0;

    // Post-burn-in time-average infected fraction of the whole population.
    double time_average_prevalence() const {
        if (!(window > 0.0)) return 0.0;
        double infected_time = 0.0;
        for (std::size_t n = 0; n < class_time.size(); ++n)
            infected_time += static_cast<double>(n) * class_time[n];
        return infected_time / (window * static_cast<double>(households * household_size));
    }

    // Post-burn-in time-average distribution of per-household counts.
    std::vector<double> class_fractions() const {
        std::vector<double> f(class_time.size(), 0.0);
        const double denom = window * static_cast<double>(households);
        if (denom > 0.0)
            for (std::size_t n = 0; n < f.size(); ++n) f[n] = class_time[n] / denom;
        return f;
    }
};

namespace detail {

struct HouseholdDeath {
    double time;
    std::int32_t household;
    bool operator>(const HouseholdDeath& o) const { return time > o.time; }
};

// Households grouped by infective count, supporting O(1) membership moves
// and uniform sampling inside a class.
class HouseholdClasses {
public:
    HouseholdClasses(std::int64_t m, std::int64_t h)
        : h_(h), counts_(static_cast<std::size_t>(m), 0),
          by_class_(static_cast<std::size_t>(h) + 1), pos_(static_cast<std::size_t>(m)) {
        auto& zero = by_class_[0];
        zero.resize(static_cast<std::size_t>(m));
        for (std::int64_t j = 0; j < m; ++j) {
            zero[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(j);
            pos_[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(j);
        }
    }

    std::int32_t count(std::int32_t household) const { return counts_[static_cast<std::size_t>(household)]; }

    std::int64_t class_size(std::int64_t n) const {
        return static_cast<std::int64_t>(by_class_[static_cast<std::size_t>(n)].size());
    }

    std::int32_t pick_in_class(std::int64_t n, double u) const {
        const auto& cls = by_class_[static_cast<std::size_t>(n)];
        auto idx = static_cast<std::size_t>(u * static_cast<double>(cls.size()));
        if (idx >= cls.size()) idx = cls.size() - 1;
        return cls[idx];
    }

    void move(std::int32_t household, std::int32_t delta) {
        const auto j = static_cast<std::size_t>(household);
        const std::int32_t from = counts_[j];
        const std::int32_t to = from + delta;
        auto& src = by_class_[static_cast<std::size_t>(from)];
        const std::int32_t p = pos_[j];
        src[static_cast<std::size_t>(p)] = src.back();
        pos_[static_cast<std::size_t>(src.back())] = p;
        src.pop_back();
        auto& dst = by_class_[static_cast<std::size_t>(to)];
        pos_[j] = static_cast<std::int32_t>(dst.size());
        dst.push_back(household);
        counts_[j] = to;
    }

    std::int64_t h() const { return h_; }

private:
    std::int64_t h_;
    std::vector<std::int32_t> counts_;
    std::vector<std::vector<std::int32_t>> by_class_;
    std::vector<std::int32_t> pos_;
};

}  // namespace detail

// Exact event-driven simulation of the household SIS model: m households of
// size h; each infective makes global contacts at rate lambda_G with a
// target uniform over all m*h individuals (contacts with infectives,
// including itself, are wasted) and local contacts at rate lambda_L with
// each other member of its household; infectious periods are iid Q.
// Equivalently, new global infections arrive at rate
// lambda_G * I * (N_h - I)/N_h landing on a uniform susceptible, and local
// infections at rate lambda_L * sum_j n_j (h - n_j).
inline HouseholdRecord simulate_household(const HouseholdConfig& cfg, const LifetimeDistribution& dist,
                                          const HouseholdInit& init, const StopRule& stop,
                                          RandomStream& rng, const EngineConfig& ecfg = {}) {
    const std::int64_t m = cfg.households;
    const std::int64_t h = cfg.household_size;
    if (m < 1 || h < 1) throw std::invalid_argument("simulate_household: need m >= 1 and h >= 1");
    if (!(cfg.lambda_global >= 0.0) || !(cfg.lambda_local >= 0.0))
        throw std::invalid_argument("simulate_household: rates must be >= 0");
    if (!(cfg.burn_in >= 0.0)) throw std::invalid_argument("simulate_household: burn_in must be >= 0");
    const double total_pop = static_cast<double>(m) * static_cast<double>(h);

    HouseholdRecord rec;
    rec.households = m;
    rec.household_size = h;
    rec.class_time.assign(static_cast<std::size_t>(h) + 1, 0.0);

    detail::HouseholdClasses classes(m, h);
    std::priority_queue<detail::HouseholdDeath, std::vector<detail::HouseholdDeath>, std::greater<>> deaths;
    std::int64_t infectives = 0;

    const auto infect = [&](std::int32_t household, bool residual, double now) {
        const double life = residual ? dist.sample_residual(rng) : dist.sample(rng);
        rec.lifetime_sum += life;
        deaths.push({now + life, household});
        classes.move(household, +1);
        ++infectives;
        ++rec.progeny;
    };

    // pick a uniformly random susceptible individual's household
    const auto pick_susceptible = [&]() -> std::int32_t {
        const double total = total_pop - static_cast<double>(infectives);
        double r = rng.uniform01() * total;
        for (std::int64_t n = 0; n < h; ++n) {
            const double wn = static_cast<double>(classes.class_size(n)) * static_cast<double>(h - n);
            if (r <= wn && wn > 0.0) return classes.pick_in_class(n, r / wn);
            r -= wn;
        }
        for (std::int64_t n = h - 1; n >= 0; --n)  // numerical edge: take the last nonempty class
            if (classes.class_size(n) > 0) return classes.pick_in_class(n, rng.uniform01());
        throw std::logic_error("simulate_household: no susceptible found");
    };

    if (init.mode() == HouseholdInit::Mode::OneInfective) {
        infect(0, false, 0.0);
    } else {
        const auto k0 = static_cast<std::int64_t>(std::llround(init.p0() * total_pop));
        const bool residual = init.residuals() == ResidualMode::EquilibriumResidual;
        for (std::int64_t i = 0; i < k0; ++i) infect(pick_susceptible(), residual, 0.0);
    }
    stop.validate(infectives);

    double t = 0.0;
    const double horizon = stop.horizon().value_or(std::numeric_limits<double>::infinity());

    const auto infection_rates = [&](double& global_rate, double& local_rate) {
        const double id = static_cast<double>(infectives);
        global_rate = cfg.lambda_global * id * (total_pop - id) / total_pop;
        local_rate = 0.0;
        for (std::int64_t n = 1; n < h; ++n)
            local_rate += static_cast<double>(classes.class_size(n)) * static_cast<double>(n) *
                          static_cast<double>(h - n);
        local_rate *= cfg.lambda_local;
    };

    const auto accrue = [&](double from, double to) {
        rec.severity += static_cast<double>(infectives) * (to - from);
        const double w0 = std::max(from, cfg.burn_in);
        if (to > w0) {
            const double dt = to - w0;
            rec.window += dt;
            for (std::int64_t n = 0; n <= h; ++n)
                rec.class_time[static_cast<std::size_t>(n)] +=
                    static_cast<double>(classes.class_size(n)) * dt;
        }
    };

    if (infectives == 0) {  // empty prevalence init: nothing to simulate
        rec.outcome = Outcome::Extinct;
        return rec;
    }
    if (stop.is_level(infectives)) {
        rec.outcome = Outcome::LevelHit;
        rec.final_infectives = infectives;
        return rec;
    }

    double global_rate, local_rate;
    infection_rates(global_rate, local_rate);
    double inf_rate = global_rate + local_rate;
    double next_infection =
        inf_rate > 0.0 ? t + rng.exponential(inf_rate) : std::numeric_limits<double>::infinity();

    for (;;) {
        const double t_death = deaths.empty() ? std::numeric_limits<double>::infinity() : deaths.top().time;
        const bool is_infection = next_infection < t_death;
        const double t_next = is_infection ? next_infection : t_death;

        if (t_next >= horizon) {
            accrue(t, horizon);
            t = horizon;
            rec.outcome = Outcome::HorizonEnd;
            break;
        }
        accrue(t, t_next);
        t = t_next;

        if (++rec.events > ecfg.event_budget)
            throw BudgetExceeded("simulate_household: event budget exceeded");

        if (is_infection) {
            std::int32_t target;
            if (rng.uniform01() * inf_rate <= global_rate) {
                target = pick_susceptible();
            } else {
                // class n with weight class_size(n) * n * (h-n)
                double r = rng.uniform01() * (local_rate / cfg.lambda_local);
                target = -1;
                std::int64_t last_mixed = -1;
                for (std::int64_t n = 1; n < h; ++n) {
                    const double wn = static_cast<double>(classes.class_size(n)) *
                                      static_cast<double>(n) * static_cast<double>(h - n);
                    if (wn > 0.0) {
                        if (r <= wn) {
                            target = classes.pick_in_class(n, r / wn);
                            break;
                        }
                        last_mixed = n;
                    }
                    r -= wn;
                }
                if (target < 0) {  // float walk overshoot: take the last mixed class
                    target = classes.pick_in_class(last_mixed, rng.uniform01());
                }
            }
            infect(target, false, t);
            if (stop.is_level(infectives)) {
                rec.outcome = Outcome::LevelHit;
                break;
            }
            if (stop.cap() && infectives >= *stop.cap()) {
                rec.outcome = Outcome::CapHit;
                break;
            }
        } else {
            const auto ev = deaths.top();
            deaths.pop();
            classes.move(ev.household, -1);
            --infectives;
            if (infectives == 0) {
                rec.outcome = Outcome::Extinct;
                break;
            }
            if (stop.is_level(infectives)) {
                rec.outcome = Outcome::LevelHit;
                break;
            }
        }

        infection_rates(global_rate, local_rate);
        inf_rate = global_rate + local_rate;
        next_infection =
            inf_rate > 0.0 ? t + rng.exponential(inf_rate) : std::numeric_limits<double>::infinity();
    }

    rec.duration = t;
    rec.final_infectives = infectives;
    return rec;
}

}  // namespace bdkit

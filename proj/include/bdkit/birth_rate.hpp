#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdkit {

enum class ModelFamily { Branching, SIS, HouseholdField, Custom };

// The birth-rate map n -> alpha(n) of a birth-death type process, where n
// is the current population size and deaths occur at rate n (each of the n
// individuals ages at unit rate). Named families:
//   Branching(lambda)                       alpha(n) = lambda n
//   SIS(N, lambda)                          alpha(n) = lambda n (N-n)/N
//   HouseholdField(h, lambda_L, lambda_G, s) alpha(n) = (h-n)(s lambda_G + n lambda_L)
//   Custom(table)                           alpha(n) = table[n-1], 0 beyond
// SIS/HouseholdField/Custom are bounded: alpha(n) = 0 for n >= the bound.
class BirthRateModel {
public:
    static BirthRateModel branching(double lambda) {
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("branching model: lambda must be >= 0");
        BirthRateModel m(ModelFamily::Branching);
        m.lambda_ = lambda;
        return m;
    }

    static BirthRateModel sis(std::int64_t population, double lambda) {
        if (population < 1) throw std::invalid_argument("sis model: N must be >= 1");
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("sis model: lambda must be > 0");
        BirthRateModel m(ModelFamily::SIS);
        m.population_ = population;
        m.lambda_ = lambda;
        return m;
    }

    static BirthRateModel household_field(std::int64_t household_size, double lambda_local,
                                          double lambda_global, double field) {
        if (household_size < 1) throw std::invalid_argument("household field model: h must be >= 1");
        if (!(lambda_local >= 0.0) || !(lambda_global >= 0.0) || !(field >= 0.0))
            throw std::invalid_argument("household field model: rates and field must be >= 0");
        BirthRateModel m(ModelFamily::HouseholdField);
        m.population_ = household_size;
        m.lambda_ = lambda_local;
        m.lambda_global_ = lambda_global;
        m.field_ = field;
        return m;
    }

    static BirthRateModel custom(std::vector<double> alpha_table) {
        if (alpha_table.empty()) throw std::invalid_argument("custom model: alpha table is empty");
        for (double a : alpha_table)
            if (!(a >= 0.0) || !std::isfinite(a))
                throw std::invalid_argument("custom model: alpha(n) must be finite and >= 0");
        BirthRateModel m(ModelFamily::Custom);
        m.table_ = std::move(alpha_table);
        return m;
    }

    ModelFamily family() const { return family_; }

    // alpha(n) for n >= 0. State 0 is absorbing for every family except
    // HouseholdField, whose external global force keeps reinfecting an
    // empty household. The regenerative construction overrides alpha(0)=1
    // regardless.
    double birth_rate(std::int64_t n) const {
        if (n < 0) throw std::invalid_argument("birth_rate: n must be >= 0");
        switch (family_) {
            case ModelFamily::Branching:
                return n == 0 ? 0.0 : lambda_ * static_cast<double>(n);
            case ModelFamily::SIS:
                if (n == 0 || n >= population_) return 0.0;
                return lambda_ * static_cast<double>(n) * static_cast<double>(population_ - n) /
                       static_cast<double>(population_);
            case ModelFamily::HouseholdField:
                if (n >= population_) return 0.0;
                return static_cast<double>(population_ - n) *
                       (field_ * lambda_global_ + static_cast<double>(n) * lambda_);
            case ModelFamily::Custom:
                if (n == 0 || n > static_cast<std::int64_t>(table_.size())) return 0.0;
                return table_[static_cast<std::size_t>(n - 1)];
        }
        return 0.0;
    }

    // Largest reachable population size, when finite: N for SIS, h for
    // HouseholdField, table length + 1 for Custom (state K+1 is reachable
    // from K when alpha(K) > 0, and alpha(K+1) = 0).
    std::optional<std::int64_t> state_bound() const {
        switch (family_) {
            case ModelFamily::Branching: return std::nullopt;
            case ModelFamily::SIS: return population_;
            case ModelFamily::HouseholdField: return population_;
            case ModelFamily::Custom: return static_cast<std::int64_t>(table_.size()) + 1;
        }
        return std::nullopt;
    }

    double lambda() const { return lambda_; }
    double lambda_global() const { return lambda_global_; }
    double field() const { return field_; }
    std::int64_t population() const { return population_; }
    const std::vector<double>& table() const { return table_; }

    std::string label() const {
        char buf[96];
        switch (family_) {
            case ModelFamily::Branching:
                std::snprintf(buf, sizeof(buf), "branching(lambda=%g)", lambda_);
                return buf;
            case ModelFamily::SIS:
                std::snprintf(buf, sizeof(buf), "sis(N=%lld,lambda=%g)",
                              static_cast<long long>(population_), lambda_);
                return buf;
            case ModelFamily::HouseholdField:
                std::snprintf(buf, sizeof(buf), "householdfield(h=%lld,lL=%g,lG=%g,s=%g)",
                              static_cast<long long>(population_), lambda_, lambda_global_, field_);
                return buf;
            case ModelFamily::Custom:
                std::snprintf(buf, sizeof(buf), "custom(%zu states)", table_.size());
                return buf;
        }
        return "?";
    }

private:
    explicit BirthRateModel(ModelFamily family) : family_(family) {}

    ModelFamily family_;
    double lambda_ = 0.0;         // branching/SIS lambda; household lambda_L
    double lambda_global_ = 0.0;  // household lambda_G
    double field_ = 0.0;          // household global field s
    std::int64_t population_ = 0; // SIS N or household h
    std::vector<double> table_;
};

}  // namespace bdkit

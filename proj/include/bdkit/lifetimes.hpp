#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bdkit/rng.hpp"

namespace bdkit {

namespace detail {

// Regularized lower incomplete gamma P(a, x), series for x < a+1 and
// continued fraction otherwise (Lentz). Plenty accurate for CDF checks.
inline double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Marsaglia-Tsang, shape >= 1, unit scale.
inline double sample_gamma_ge1(double shape, RandomStream& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double x, v;
        do {
            x = rng.normal01();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline double sample_gamma(double shape, RandomStream& rng) {
    if (shape >= 1.0) return sample_gamma_ge1(shape, rng);
    // boost via Gamma(shape+1) * U^{1/shape}
    return sample_gamma_ge1(shape + 1.0, rng) * std::pow(rng.uniform01(), 1.0 / shape);
}

inline double sinhc(double x) {  // sinh(x)/x
    if (std::fabs(x) < 1e-4) return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

}  // namespace detail

enum class LifetimeKind { Exponential, Deterministic, Gamma, Uniform, TwoPoint };

// A mean-one positive lifetime law Q. Parameterizations are constrained at
// construction so E[Q] = 1 exactly:
//   Exponential            rate 1
//   Deterministic          point mass at 1
//   Gamma(k)               shape k, rate k
//   Uniform(w)             uniform on [1-w, 1+w], w in (0, 1]
//   TwoPoint(a, p)         value a w.p. p, value (1-pa)/(1-p) w.p. 1-p,
//                          a in (0,1), p in (0,1)
// All kinds have strictly positive support and finite closed-form variance.
class LifetimeDistribution {
public:
    static LifetimeDistribution exponential() { return LifetimeDistribution(LifetimeKind::Exponential, 0, 0); }

    static LifetimeDistribution deterministic() { return LifetimeDistribution(LifetimeKind::Deterministic, 0, 0); }

    static LifetimeDistribution gamma(double shape) {
        if (!(shape > 0.0) || !std::isfinite(shape))
            throw std::invalid_argument("gamma lifetime: shape must be positive");
        return LifetimeDistribution(LifetimeKind::Gamma, shape, 0);
    }

    static LifetimeDistribution uniform(double half_width) {
        if (!(half_width > 0.0 && half_width <= 1.0))
            throw std::invalid_argument("uniform lifetime: half-width must be in (0, 1]");
        return LifetimeDistribution(LifetimeKind::Uniform, half_width, 0);
    }

    static LifetimeDistribution two_point(double a, double p) {
        if (!(a > 0.0 && a < 1.0) || !(p > 0.0 && p < 1.0))
            throw std::invalid_argument("twopoint lifetime: need a in (0,1) and p in (0,1)");
        return LifetimeDistribution(LifetimeKind::TwoPoint, a, p);
    }

    LifetimeKind kind() const { return kind_; }

    double mean() const { return 1.0; }

    double variance() const {
        switch (kind_) {
            case LifetimeKind::Exponential: return 1.0;
            case LifetimeKind::Deterministic: return 0.0;
            case LifetimeKind::Gamma: return 1.0 / p1_;
            case LifetimeKind::Uniform: return p1_ * p1_ / 3.0;
            case LifetimeKind::TwoPoint: return second_moment() - 1.0;
        }
        return 0.0;
    }

    double second_moment() const {
        if (kind_ == LifetimeKind::TwoPoint) {
            const double b = two_point_high();
            return p2_ * p1_ * p1_ + (1.0 - p2_) * b * b;
        }
        return variance() + 1.0;
    }

    // Laplace transform L(theta) = E[exp(-theta Q)], theta >= 0.
    double laplace(double theta) const {
        if (theta < 0.0) throw std::invalid_argument("laplace: theta must be >= 0");
        if (theta == 0.0) return 1.0;
        switch (kind_) {
            case LifetimeKind::Exponential: return 1.0 / (1.0 + theta);
            case LifetimeKind::Deterministic: return std::exp(-theta);
            case LifetimeKind::Gamma:
                // (k/(k+theta))^k
                return std::exp(-p1_ * std::log1p(theta / p1_));
            case LifetimeKind::Uniform:
                return std::exp(-theta) * detail::sinhc(theta * p1_);
            case LifetimeKind::TwoPoint:
                return p2_ * std::exp(-theta * p1_) + (1.0 - p2_) * std::exp(-theta * two_point_high());
        }
        return 0.0;
    }

    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        switch (kind_) {
            case LifetimeKind::Exponential: return -std::expm1(-x);
            case LifetimeKind::Deterministic: return x >= 1.0 ? 1.0 : 0.0;
            case LifetimeKind::Gamma: return detail::gamma_p(p1_, p1_ * x);
            case LifetimeKind::Uniform: {
                if (x <= 1.0 - p1_) return 0.0;
                if (x >= 1.0 + p1_) return 1.0;
                return (x - (1.0 - p1_)) / (2.0 * p1_);
            }
            case LifetimeKind::TwoPoint: {
                double f = 0.0;
                if (x >= p1_) f += p2_;
                if (x >= two_point_high()) f += 1.0 - p2_;
                return f;
            }
        }
        return 0.0;
    }

    // Point mass at x (nonzero only for the discrete kinds).
    double pmf(double x) const {
        switch (kind_) {
            case LifetimeKind::Deterministic: return x == 1.0 ? 1.0 : 0.0;
            case LifetimeKind::TwoPoint:
                if (x == p1_) return p2_;
                if (x == two_point_high()) return 1.0 - p2_;
                return 0.0;
            default: return 0.0;
        }
    }

    double sample(RandomStream& rng) const {
        switch (kind_) {
            case LifetimeKind::Exponential: return rng.exponential(1.0);
            case LifetimeKind::Deterministic: return 1.0;
            case LifetimeKind::Gamma: return detail::sample_gamma(p1_, rng) / p1_;
            case LifetimeKind::Uniform: return 1.0 - p1_ + 2.0 * p1_ * rng.uniform01();
            case LifetimeKind::TwoPoint: return rng.uniform01() <= p2_ ? p1_ : two_point_high();
        }
        return 1.0;
    }

    // Draw from the stationary residual-lifetime (equilibrium excess-life)
    // law, density P(Q > u) since E[Q] = 1. Exponential is its own residual
    // law (memorylessness); every other kind uses the exact representation
    // R = U * Q*, with U uniform and Q* length-biased, where the
    // length-biased draw is closed form per kind:
    //   Deterministic  Q* = 1                      (R ~ Uniform(0,1))
    //   Gamma(k)       Q* ~ Gamma(k+1, rate k)
    //   Uniform(w)     Q* = sqrt((1-w)^2 + 4 w U') (density prop. to q)
    //   TwoPoint       Q* = a w.p. a p, else high value
    double sample_residual(RandomStream& rng) const {
        switch (kind_) {
            case LifetimeKind::Exponential: return rng.exponential(1.0);
            case LifetimeKind::Deterministic: return rng.uniform01();
            case LifetimeKind::Gamma: return rng.uniform01() * detail::sample_gamma(p1_ + 1.0, rng) / p1_;
            case LifetimeKind::Uniform: {
                const double lo = 1.0 - p1_;
                const double q = std::sqrt(lo * lo + 4.0 * p1_ * rng.uniform01());
                return rng.uniform01() * q;
            }
            case LifetimeKind::TwoPoint: {
                const double q = rng.uniform01() <= p1_ * p2_ ? p1_ : two_point_high();
                return rng.uniform01() * q;
            }
        }
        return 1.0;
    }

    // Canonical text form, same grammar parse_lifetime() accepts.
    std::string label() const {
        char buf[64];
        switch (kind_) {
            case LifetimeKind::Exponential: return "exp";
            case LifetimeKind::Deterministic: return "det";
            case LifetimeKind::Gamma:
                std::snprintf(buf, sizeof(buf), "gamma:k=%g", p1_);
                return buf;
            case LifetimeKind::Uniform:
                std::snprintf(buf, sizeof(buf), "unif:w=%g", p1_);
                return buf;
            case LifetimeKind::TwoPoint:
                std::snprintf(buf, sizeof(buf), "twopoint:a=%g,p=%g", p1_, p2_);
                return buf;
        }
        return "?";
    }

    double two_point_high() const { return (1.0 - p2_ * p1_) / (1.0 - p2_); }

    double param1() const { return p1_; }
    double param2() const { return p2_; }

private:
    LifetimeDistribution(LifetimeKind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

    LifetimeKind kind_;
    double p1_;
    double p2_;
};

namespace detail {

inline double parse_double_field(std::string_view text, std::string_view key, std::string_view whole) {
    const auto pos = text.find(key);
    if (pos == std::string_view::npos)
        throw std::invalid_argument("bad lifetime spec '" + std::string(whole) + "': missing " + std::string(key));
    const std::string rest(text.substr(pos + key.size()));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str())
        throw std::invalid_argument("bad lifetime spec '" + std::string(whole) + "': cannot parse number");
    return v;
}

}  // namespace detail

// Parses "exp", "det", "gamma:k=<f>", "unif:w=<f>", "twopoint:a=<f>,p=<f>".
inline LifetimeDistribution parse_lifetime(std::string_view spec) {
    if (spec == "exp") return LifetimeDistribution::exponential();
    if (spec == "det") return LifetimeDistribution::deterministic();
    if (spec.rfind("gamma:", 0) == 0)
        return LifetimeDistribution::gamma(detail::parse_double_field(spec, "k=", spec));
    if (spec.rfind("unif:", 0) == 0)
        return LifetimeDistribution::uniform(detail::parse_double_field(spec, "w=", spec));
    if (spec.rfind("twopoint:", 0) == 0)
        return LifetimeDistribution::two_point(detail::parse_double_field(spec, "a=", spec),
                                               detail::parse_double_field(spec, "p=", spec));
    throw std::invalid_argument("unknown lifetime spec '" + std::string(spec) + "'");
}

}  // namespace bdkit

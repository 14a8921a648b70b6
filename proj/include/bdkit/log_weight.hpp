#pragma once

#include <cmath>
#include <limits>

namespace bdkit {

// A nonnegative real stored as its natural logarithm (-inf encodes zero).
// Needed because stationary-weight sums reach exp(c*N) scale, which
// overflows double near N ~ 700.
struct LogWeight {
    double log_value = -std::numeric_limits<double>::infinity();

    static LogWeight zero() { return {}; }

    static LogWeight from_log(double l) { return {l}; }

    static LogWeight from_linear(double x) {
        return {x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity()};
    }

    bool is_zero() const { return std::isinf(log_value) && log_value < 0.0; }

    // Linear value; +inf if it overflows double.
    double linear() const { return std::exp(log_value); }
};

// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
    if (std::isinf(a) && a < 0.0) return b;
    if (std::isinf(b) && b < 0.0) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp((a > b ? b : a) - m));
}

inline LogWeight log_add(LogWeight a, LogWeight b) {
    return LogWeight::from_log(log_add(a.log_value, b.log_value));
}

// Streaming log-sum-exp accumulator: keeps the running max and the sum of
// rescaled exponentials, rescaling when a larger term arrives.
class LogSum {
public:
    void add(double log_term) {
        if (std::isinf(log_term) && log_term < 0.0) return;
        if (empty_) {
            max_ = log_term;
            scaled_ = 1.0;
            empty_ = false;
            return;
        }
        if (log_term <= max_) {
            scaled_ += std::exp(log_term - max_);
        } else {
            scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }

    void add(LogWeight w) { add(w.log_value); }

    bool empty() const { return empty_; }

    double log() const {
        if (empty_) return -std::numeric_limits<double>::infinity();
        return max_ + std::log(scaled_);
    }

    LogWeight value() const { return LogWeight::from_log(log()); }

private:
    bool empty_ = true;
    double max_ = 0.0;
    double scaled_ = 0.0;
};

}  // namespace bdkit

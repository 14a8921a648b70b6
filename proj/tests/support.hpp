#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

// Shared helpers for the test suites: sample statistics and
// Kolmogorov-Smirnov distances (atom-aware for discrete laws).

namespace testsupport {

struct SampleStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double std_error = 0.0;
    std::size_t n = 0;
};

inline SampleStats stats_of(const std::vector<double>& xs) {
    SampleStats s;
    s.n = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = s.n > 1 ? ss / static_cast<double>(s.n - 1) : 0.0;
    s.std_error = std::sqrt(s.variance / static_cast<double>(s.n));
    return s;
}

// One-sample KS distance sup |F_n - F|, handling point masses through the
// pmf (zero for continuous laws).
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                           const std::function<double(double)>& pmf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double x = samples[i];
        const double f = cdf(x);
        const double f_left = f - pmf(x);
        d = std::max(d, std::fabs(f - static_cast<double>(j) / n));
        d = std::max(d, std::fabs(f_left - static_cast<double>(i) / n));
        i = j;
    }
    return d;
}

// Two-sample KS distance sup |F_a - F_b|.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Asymptotic 1% critical values.
inline double ks_critical_1pct(std::size_t n) { return 1.62762 / std::sqrt(static_cast<double>(n)); }

inline double ks_two_sample_critical_1pct(std::size_t n, std::size_t m) {
    return 1.62762 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace testsupport

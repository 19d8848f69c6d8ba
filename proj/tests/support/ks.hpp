#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace testsupport {

// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the pooled
// sample.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Critical value c(level)*sqrt((n+m)/(n*m)); c = 1.63 for the 1% level.
inline double ks_critical_1pct(std::size_t n, std::size_t m) {
    return 1.63 * std::sqrt(static_cast<double>(n + m) /
                            (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace testsupport

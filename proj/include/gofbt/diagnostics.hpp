#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gofbt {

/// Coefficient of variation of the empirical-CDF estimator as a function of
/// sample size: sqrt(n + 8/3) / (n + 1). Strictly decreasing, asymptotically
/// 1/sqrt(n). Used as a small-sample reliability warning for the test
/// statistics: a large value means the statistic's own measurement noise
/// dominates.
inline double coefficient_of_variation(int n) {
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
    const double nd = n;
    return std::sqrt(nd + 8.0 / 3.0) / (nd + 1.0);
}

struct CovReport {
    int n = 0;
    double cov = 0.0;
    double threshold = 0.10;
    bool warn = false;
    std::string caveat;  // set for very small samples where the CLT backing is weak
};

inline CovReport cov_warning(int n, double threshold = 0.10) {
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    CovReport r;
    r.n = n;
    r.cov = coefficient_of_variation(n);
    r.threshold = threshold;
    r.warn = r.cov > threshold;
    if (n < 10)
        r.caveat = "sample size below 10: the CLT approximation behind this indicator is weak";
    return r;
}

inline std::vector<std::pair<int, double>> cov_curve(int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min) throw std::invalid_argument("invalid range");
    std::vector<std::pair<int, double>> out;
    out.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) out.emplace_back(n, coefficient_of_variation(n));
    return out;
}

}  // namespace gofbt

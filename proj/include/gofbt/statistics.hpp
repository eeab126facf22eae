#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "gofbt/prob_sample.hpp"

namespace gofbt {

enum class TestKind { ad, ad_asym, ks, cm };

inline const char* test_name(TestKind k) {
    switch (k) {
        case TestKind::ad: return "ad";
        case TestKind::ad_asym: return "ad_asym";
        case TestKind::ks: return "ks";
        case TestKind::cm: return "cm";
    }
    throw std::logic_error("unknown test kind");
}

inline TestKind test_from_name(const std::string& name) {
    if (name == "ad") return TestKind::ad;
    if (name == "ad_asym") return TestKind::ad_asym;
    if (name == "ks") return TestKind::ks;
    if (name == "cm") return TestKind::cm;
    throw std::invalid_argument("unknown test name: " + name);
}

struct GofStatistic {
    TestKind kind;
    double value;
    int n;
};

/// Anderson-Darling statistic on uniform(0,1) order statistics:
///   W2 = -n - sum_k (2k-1)/n * [ln(u_k) + ln(1 - u_{n+1-k})]
inline GofStatistic ad_statistic(const ProbSample& u) {
    const int n = u.n();
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double uk = u.values[static_cast<std::size_t>(k - 1)];
        const double um = u.values[static_cast<std::size_t>(n - k)];
        acc += (2.0 * k - 1.0) / n * (std::log(uk) + std::log1p(-um));
    }
    const double w2 = -n - acc;
    if (!std::isfinite(w2)) throw std::runtime_error("ad_statistic is not finite");
    return GofStatistic{TestKind::ad, w2, n};
}

namespace detail {

// Antiderivative of (u - m)^4 / (u^2 (1-u)^2) used by the tail-weighted
// statistic below. Verified symbolically; the log(1-u) coefficient is
// +2(1+m)(1-m)^3.
inline double asym_segment_antiderivative(double u, double m) {
    const double m3 = m * m * m;
    const double one_m = 1.0 - m;
    const double one_m3 = one_m * one_m * one_m;
    return u + 2.0 * m3 * (m - 2.0) * std::log(u) - (m3 * m) / u +
           2.0 * (1.0 + m) * one_m3 * std::log1p(-u) + (one_m3 * one_m) / (1.0 - u);
}

}  // namespace detail

/// Tail-weighted generalization of the Anderson-Darling statistic with the
/// squared-error and variance terms both raised to the power 2. Evaluated in
/// closed form: each step segment of the empirical CDF contributes a rational
/// + logarithmic antiderivative, the telescoped interior terms reduce to
/// cubic-coefficient functions of k, and the open segment above the largest
/// observation contributes 1/u_n + 2 ln(u_n) - u_n. The n^2 factor comes
/// from the variance weight ((1-u)u/n)^2.
///
/// Blows up (in value, not numerically) when the smallest or largest
/// observation sits very deep in a tail, which is exactly the behaviour that
/// makes it sensitive to volatility underestimation in small samples.
inline GofStatistic ad_asym_statistic(const ProbSample& u) {
    const int n = u.n();
    const double nd = n;
    const double n4 = nd * nd * nd * nd;
    const double un = u.values.back();

    // Closing segment constant: value of the k = n antiderivative at u_n
    // minus its value at 0 for the k = 1 segment (which is 1).
    const double m_last = (nd - 1.0) / nd;
    const double head = detail::asym_segment_antiderivative(un, m_last) - 1.0;

    double interior = 0.0;
    for (int k = 1; k <= n - 1; ++k) {
        const double uk = u.values[static_cast<std::size_t>(k - 1)];
        const double kd = k;
        const double k2 = kd * kd;
        const double k3 = k2 * kd;
        const double a1 = (4.0 * k3 - 6.0 * k2 + 4.0 * kd - 1.0) / n4;
        const double a2 =
            2.0 * (6.0 * nd * k2 - 6.0 * nd * kd + 2.0 * nd - 4.0 * k3 + 6.0 * k2 - 4.0 * kd + 1.0) / n4;
        const double nk = nd - kd;
        const double nk1 = nk + 1.0;
        const double a3 = (nk * nk * nk * nk - nk1 * nk1 * nk1 * nk1) / n4;
        const double a4 =
            2.0 * (2.0 * nd * nd * nd - 6.0 * nd * k2 + 6.0 * nd * kd - 2.0 * nd + 4.0 * k3 - 6.0 * k2 + 4.0 * kd - 1.0) / n4;
        interior += a1 / uk + a2 * std::log(uk) + a3 / (uk - 1.0) + a4 * std::log1p(-uk);
    }

    // Segment from u_n to 1 where the empirical CDF equals one.
    const double tail = 1.0 / un + 2.0 * std::log(un) - un;

    const double w2 = nd * nd * (head + interior + tail);
    if (!std::isfinite(w2)) throw std::runtime_error("ad_asym_statistic is not finite");
    return GofStatistic{TestKind::ad_asym, w2, n};
}

/// Two-sided Kolmogorov-Smirnov distance D_n in [0,1].
inline GofStatistic ks_statistic(const ProbSample& u) {
    const int n = u.n();
    double d = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double uk = u.values[static_cast<std::size_t>(k - 1)];
        d = std::max(d, static_cast<double>(k) / n - uk);
        d = std::max(d, uk - static_cast<double>(k - 1) / n);
    }
    return GofStatistic{TestKind::ks, d, n};
}

/// Cramer-von Mises statistic 1/(12n) + sum_k (u_k - (2k-1)/(2n))^2.
inline GofStatistic cm_statistic(const ProbSample& u) {
    const int n = u.n();
    double acc = 1.0 / (12.0 * n);
    for (int k = 1; k <= n; ++k) {
        const double diff = u.values[static_cast<std::size_t>(k - 1)] - (2.0 * k - 1.0) / (2.0 * n);
        acc += diff * diff;
    }
    return GofStatistic{TestKind::cm, acc, n};
}

inline GofStatistic compute_statistic(TestKind kind, const ProbSample& u) {
    switch (kind) {
        case TestKind::ad: return ad_statistic(u);
        case TestKind::ad_asym: return ad_asym_statistic(u);
        case TestKind::ks: return ks_statistic(u);
        case TestKind::cm: return cm_statistic(u);
    }
    throw std::logic_error("unknown test kind");
}

}  // namespace gofbt

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace gofbt {

struct HpDecomposition {
    std::vector<double> trend;
    std::vector<double> cycle;
    double lambda = 0.0;
};

namespace detail {

// Solves the symmetric positive definite pentadiagonal system A x = b via
// banded Cholesky (bandwidth 2). Diagonals: d0 main, d1 first super, d2
// second super.
inline std::vector<double> solve_pentadiagonal(std::vector<double> d0, std::vector<double> d1,
                                               std::vector<double> d2, std::vector<double> b) {
    const std::size_t n = d0.size();
    // In-place LDL^T: d0 becomes D, d1/d2 become the unit-lower factors.
    for (std::size_t i = 0; i < n; ++i) {
        double di = d0[i];
        if (i >= 1) di -= d1[i - 1] * d1[i - 1] * d0[i - 1];
        if (i >= 2) di -= d2[i - 2] * d2[i - 2] * d0[i - 2];
        if (!(di > 0.0)) throw std::logic_error("pentadiagonal system not positive definite");
        d0[i] = di;
        if (i + 1 < n) {
            double e = d1[i];
            if (i >= 1) e -= d1[i - 1] * d0[i - 1] * d2[i - 1];
            d1[i] = e / di;
        }
        if (i + 2 < n) d2[i] = d2[i] / di;
    }
    // Forward substitution L y = b.
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 1) b[i] -= d1[i - 1] * b[i - 1];
        if (i >= 2) b[i] -= d2[i - 2] * b[i - 2];
    }
    // Diagonal scale.
    for (std::size_t i = 0; i < n; ++i) b[i] /= d0[i];
    // Back substitution L^T x = y.
    for (std::size_t ii = n; ii-- > 0;) {
        if (ii + 1 < n) b[ii] -= d1[ii] * b[ii + 1];
        if (ii + 2 < n) b[ii] -= d2[ii] * b[ii + 2];
    }
    return b;
}

}  // namespace detail

/// Hodrick-Prescott decomposition: the trend minimizes
///   sum (y_t - tau_t)^2 + lambda * sum (tau_{t+1} - 2 tau_t + tau_{t-1})^2,
/// i.e. solves (I + lambda D'D) tau = y with D the second-difference
/// operator. The cycle is y - trend, so trend + cycle reconstructs the input
/// exactly.
inline HpDecomposition hp_filter(std::span<const double> series, double lambda) {
    const std::size_t n = series.size();
    if (n < 3) throw std::invalid_argument("hp_filter needs at least 3 observations");
    if (!(lambda > 0.0)) throw std::invalid_argument("hp_filter lambda must be positive");

    // Assemble I + lambda * D'D (symmetric, bandwidth 2).
    std::vector<double> d0(n, 1.0), d1(n > 1 ? n - 1 : 0, 0.0), d2(n > 2 ? n - 2 : 0, 0.0);
    for (std::size_t r = 0; r + 2 < n; ++r) {
        // Row r of D has entries (1, -2, 1) at columns r, r+1, r+2.
        d0[r] += lambda;
        d0[r + 1] += 4.0 * lambda;
        d0[r + 2] += lambda;
        d1[r] += -2.0 * lambda;
        d1[r + 1] += -2.0 * lambda;
        d2[r] += lambda;
    }

    HpDecomposition out;
    out.lambda = lambda;
    out.trend = detail::solve_pentadiagonal(std::move(d0), std::move(d1), std::move(d2),
                                            std::vector<double>(series.begin(), series.end()));
    out.cycle.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.cycle[i] = series[i] - out.trend[i];
    return out;
}

/// Frequency-adjusted smoothing default: 1600 scaled by the fourth power of
/// observations per quarter (Ravn-Uhlig rule). dt is the step in years.
inline double hp_default_lambda(double dt_years) {
    if (!(dt_years > 0.0)) throw std::invalid_argument("dt must be positive");
    const double obs_per_quarter = 0.25 / dt_years;
    return 1600.0 * obs_per_quarter * obs_per_quarter * obs_per_quarter * obs_per_quarter;
}

}  // namespace gofbt

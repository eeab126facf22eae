#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace gofbt {

/// A sorted sample of probability-integral-transform values, each strictly
/// inside (0,1). Every test statistic consumes one of these. Ties are
/// allowed (they arise from discrete forecast grids); exact 0 or 1 is
/// rejected because the statistics take logarithms of u and 1-u.
struct ProbSample {
    std::vector<double> values;  // ascending

    static ProbSample from(std::vector<double> v) {
        if (v.empty()) throw std::invalid_argument("empty probability sample");
        std::sort(v.begin(), v.end());
        for (double u : v) {
            if (!(u > 0.0 && u < 1.0))
                throw std::invalid_argument("degenerate probability");
        }
        return ProbSample{std::move(v)};
    }

    int n() const { return static_cast<int>(values.size()); }
};

/// Forecast scenario set for one backtesting date. Order is irrelevant.
struct ForecastSet {
    std::vector<double> scenarios;

    int count() const { return static_cast<int>(scenarios.size()); }
};

/// Maps a realized value to its p-value within the forecast distribution:
/// (i+1)/(N+2) where i is the number of scenarios strictly below the
/// realization. This covers the boundary cases in one expression: a
/// realization below every scenario gets 1/(N+2), above every scenario
/// (N+1)/(N+2). A realization exactly equal to a scenario counts that
/// scenario as not-below (ties break downward).
inline double pit_map(double realized, const ForecastSet& forecasts) {
    const int n = forecasts.count();
    if (n < 1) throw std::invalid_argument("empty forecast set");
    long below = 0;
    for (double s : forecasts.scenarios)
        if (s < realized) ++below;
    return static_cast<double>(below + 1) / static_cast<double>(n + 2);
}

}  // namespace gofbt

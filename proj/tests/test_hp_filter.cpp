#include "gofbt/hp_filter.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gofbt/rng.hpp"

using namespace gofbt;

namespace {

// Dense reference: assemble I + lambda D'D and solve by Gaussian elimination.
std::vector<double> dense_hp_trend(const std::vector<double>& y, double lambda) {
    const std::size_t n = y.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
    for (std::size_t r = 0; r + 2 < n; ++r) {
        const double row[3] = {1.0, -2.0, 1.0};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[r + i][r + j] += lambda * row[i] * row[j];
    }
    std::vector<double> b = y;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t c = ii + 1; c < n; ++c) s -= a[ii][c] * x[c];
        x[ii] = s / a[ii][ii];
    }
    return x;
}

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
    rng::Xoshiro256 gen(seed);
    std::vector<double> y(n);
    double level = 0.0;
    for (auto& v : y) {
        level += 0.1 * rng::normal(gen);
        v = level + 0.3 * rng::normal(gen);
    }
    return y;
}

}  // namespace

TEST(HpFilter, MatchesDenseSolver) {
    for (const std::size_t n : {3u, 4u, 7u, 12u, 25u}) {
        const auto y = random_series(n, 100 + n);
        for (const double lambda : {0.5, 10.0, 1600.0}) {
            const auto fast = hp_filter(y, lambda);
            const auto slow = dense_hp_trend(y, lambda);
            for (std::size_t i = 0; i < n; ++i)
                EXPECT_NEAR(fast.trend[i], slow[i], 1e-9) << "n=" << n << " lambda=" << lambda;
        }
    }
}

TEST(HpFilter, ConstantSeriesHasZeroCycle) {
    const std::vector<double> y(20, 3.25);
    const auto d = hp_filter(y, 1600.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        EXPECT_NEAR(d.trend[i], 3.25, 1e-10);
        EXPECT_NEAR(d.cycle[i], 0.0, 1e-10);
    }
}

TEST(HpFilter, LinearSeriesHasZeroCycle) {
    std::vector<double> y;
    for (int i = 0; i < 30; ++i) y.push_back(0.5 + 0.02 * i);
    const auto d = hp_filter(y, 1e6);
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(d.cycle[i], 0.0, 1e-9);
}

TEST(HpFilter, ReconstructionIsExact) {
    const auto y = random_series(200, 9);
    const auto d = hp_filter(y, 39062500.0);
    for (std::size_t i = 0; i < y.size(); ++i)
        EXPECT_NEAR(d.trend[i] + d.cycle[i], y[i], 1e-12);
}

TEST(HpFilter, SmallLambdaTrendFollowsSeries) {
    const auto y = random_series(50, 21);
    const auto d = hp_filter(y, 1e-8);
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(d.trend[i], y[i], 1e-6);
}

TEST(HpFilter, LargeLambdaFlattensTrend) {
    const auto y = random_series(120, 33);
    const auto d = hp_filter(y, 1e12);
    double max_dd = 0.0;
    for (std::size_t i = 2; i < y.size(); ++i)
        max_dd = std::max(max_dd,
                          std::abs(d.trend[i] - 2.0 * d.trend[i - 1] + d.trend[i - 2]));
    EXPECT_LT(max_dd, 1e-6);
}

TEST(HpFilter, ValidatesInput) {
    EXPECT_THROW(hp_filter(std::vector<double>{1.0, 2.0}, 10.0), std::invalid_argument);
    EXPECT_THROW(hp_filter(std::vector<double>{1.0, 2.0, 3.0}, 0.0), std::invalid_argument);
}

TEST(HpDefaultLambda, FiveDaySampling) {
    // 50 observations per year -> 12.5 per quarter -> 1600 * 12.5^4.
    EXPECT_NEAR(hp_default_lambda(5.0 / 250.0), 39062500.0, 1e-6);
    EXPECT_NEAR(hp_default_lambda(0.25), 1600.0, 1e-9);
}

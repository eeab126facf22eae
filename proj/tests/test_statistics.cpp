#include "gofbt/statistics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gofbt/quadrature.hpp"
#include "test_util.hpp"

using namespace gofbt;

// ---- PIT mapping ---------------------------------------------------------

TEST(PitMap, BranchExamples) {
    const ForecastSet f{{1.0, 2.0, 3.0}};
    EXPECT_DOUBLE_EQ(pit_map(0.5, f), 0.2);  // below every scenario: 1/5
    EXPECT_DOUBLE_EQ(pit_map(2.5, f), 0.6);  // two scenarios below: 3/5
    EXPECT_DOUBLE_EQ(pit_map(4.0, f), 0.8);  // above every scenario: 4/5
}

TEST(PitMap, TieBreaksDownward) {
    const ForecastSet f{{1.0, 2.0, 3.0}};
    EXPECT_DOUBLE_EQ(pit_map(2.0, f), 0.4);  // only the scenario at 1.0 counts as below
    EXPECT_DOUBLE_EQ(pit_map(1.0, f), 0.2);
    EXPECT_DOUBLE_EQ(pit_map(3.0, f), 0.6);
}

TEST(PitMap, EmptyForecastSetThrows) {
    EXPECT_THROW(pit_map(1.0, ForecastSet{}), std::invalid_argument);
}

TEST(PitMap, MonotoneAndBounded) {
    rng::Xoshiro256 gen(11);
    for (int rep = 0; rep < 50; ++rep) {
        ForecastSet f;
        const int n = 1 + static_cast<int>(gen.next() % 40);
        for (int i = 0; i < n; ++i) f.scenarios.push_back(rng::normal(gen));
        double prev = 0.0;
        for (double r = -4.0; r <= 4.0; r += 0.05) {
            const double p = pit_map(r, f);
            EXPECT_GE(p, prev);
            EXPECT_GE(p, 1.0 / (n + 2) - 1e-15);
            EXPECT_LE(p, (n + 1.0) / (n + 2) + 1e-15);
            prev = p;
        }
    }
}

TEST(PitMap, InvariantUnderIncreasingTransform) {
    const ForecastSet f{{0.4, 1.1, 2.7, 0.9}};
    ForecastSet g;
    for (double s : f.scenarios) g.scenarios.push_back(std::exp(s));
    for (double r : {0.2, 0.9, 1.5, 3.0})
        EXPECT_DOUBLE_EQ(pit_map(r, f), pit_map(std::exp(r), g));
}

// ---- sample validation ----------------------------------------------------

TEST(ProbSample, RejectsDegenerateAndEmpty) {
    EXPECT_THROW(ProbSample::from({}), std::invalid_argument);
    EXPECT_THROW(ProbSample::from({0.0, 0.5}), std::invalid_argument);
    EXPECT_THROW(ProbSample::from({0.5, 1.0}), std::invalid_argument);
}

TEST(ProbSample, SortsAndAllowsTies) {
    const auto s = ProbSample::from({0.7, 0.3, 0.3});
    EXPECT_TRUE(std::is_sorted(s.values.begin(), s.values.end()));
    EXPECT_TRUE(std::isfinite(ad_statistic(s).value));
    EXPECT_TRUE(std::isfinite(ad_asym_statistic(s).value));
    EXPECT_TRUE(std::isfinite(ks_statistic(s).value));
    EXPECT_TRUE(std::isfinite(cm_statistic(s).value));
}

// ---- Anderson-Darling -----------------------------------------------------

TEST(AdStatistic, HandValues) {
    EXPECT_NEAR(ad_statistic(ProbSample::from({0.5})).value, 0.3862943611198906, 1e-12);
    EXPECT_NEAR(ad_statistic(ProbSample::from({0.25, 0.75})).value, 0.24934057847523317, 1e-12);
}

TEST(AdStatistic, SortOrderIrrelevant) {
    const auto a = ad_statistic(ProbSample::from({0.9, 0.1, 0.4, 0.6}));
    const auto b = ad_statistic(ProbSample::from({0.1, 0.4, 0.6, 0.9}));
    EXPECT_DOUBLE_EQ(a.value, b.value);
}

TEST(AdStatistic, MatchesIntegralForm) {
    for (int rep = 0; rep < 120; ++rep) {
        const int n = 1 + rep % 10;
        const auto u = test_util::random_sample(n, 1000 + static_cast<std::uint64_t>(rep));
        const double direct = ad_statistic(u).value;
        const double viaIntegral = ad_asym_quadrature(u, 1.0, 1e-10);
        EXPECT_NEAR(direct, viaIntegral, 1e-7) << "n=" << n << " rep=" << rep;
    }
}

// ---- tail-weighted statistic ----------------------------------------------

TEST(AdAsymStatistic, HandValues) {
    EXPECT_NEAR(ad_asym_statistic(ProbSample::from({0.5})).value, 0.22741127776021886, 1e-12);
    EXPECT_NEAR(ad_asym_statistic(ProbSample::from({0.25, 0.75})).value, 0.10124997476717601,
                1e-12);
}

TEST(AdAsymStatistic, MatchesQuadrature) {
    for (int rep = 0; rep < 120; ++rep) {
        const int n = 2 + rep % 9;
        const auto u = test_util::random_sample(n, 5000 + static_cast<std::uint64_t>(rep));
        const double closed = ad_asym_statistic(u).value;
        const double numeric = ad_asym_quadrature(u, 2.0, 1e-9);
        EXPECT_LT(std::abs(closed - numeric) / std::abs(numeric), 1e-6)
            << "n=" << n << " rep=" << rep;
    }
}

TEST(AdAsymStatistic, FiniteForExtremeTails) {
    const auto s = ProbSample::from({std::numeric_limits<double>::min(), 0.5,
                                     1.0 - std::numeric_limits<double>::epsilon() / 2.0});
    EXPECT_TRUE(std::isfinite(ad_asym_statistic(s).value));
    EXPECT_GT(ad_asym_statistic(s).value, 1e100);
}

TEST(Quadrature, BetaBelowOneRejected) {
    EXPECT_THROW(ad_asym_quadrature(ProbSample::from({0.5}), 0.5), std::invalid_argument);
}

// ---- Kolmogorov-Smirnov -----------------------------------------------------

TEST(KsStatistic, HandValues) {
    EXPECT_DOUBLE_EQ(ks_statistic(ProbSample::from({0.5})).value, 0.5);
    EXPECT_DOUBLE_EQ(ks_statistic(ProbSample::from({0.25, 0.75})).value, 0.25);
    std::vector<double> even;
    for (int k = 1; k <= 9; ++k) even.push_back(k / 10.0);
    EXPECT_NEAR(ks_statistic(ProbSample::from(even)).value, 0.1, 1e-15);
}

TEST(KsStatistic, PermutationInvariant) {
    std::vector<double> u = {0.12, 0.55, 0.31, 0.87, 0.44};
    const double base = ks_statistic(ProbSample::from(u)).value;
    std::mt19937 shuffler(3);
    for (int rep = 0; rep < 10; ++rep) {
        std::shuffle(u.begin(), u.end(), shuffler);
        EXPECT_DOUBLE_EQ(ks_statistic(ProbSample::from(u)).value, base);
        EXPECT_DOUBLE_EQ(cm_statistic(ProbSample::from(u)).value,
                         cm_statistic(ProbSample::from({0.12, 0.31, 0.44, 0.55, 0.87})).value);
    }
}

// ---- Cramer-von Mises -------------------------------------------------------

TEST(CmStatistic, HandValues) {
    EXPECT_NEAR(cm_statistic(ProbSample::from({0.5})).value, 1.0 / 12.0, 1e-15);
    EXPECT_NEAR(cm_statistic(ProbSample::from({0.25, 0.75})).value, 1.0 / 24.0, 1e-15);
}

TEST(CmStatistic, MatchesIntegralDefinition) {
    // n * integral of (F_n(u) - u)^2 du over [0,1], evaluated piecewise.
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 1 + rep % 8;
        const auto u = test_util::random_sample(n, 9000 + static_cast<std::uint64_t>(rep));
        double integral = 0.0;
        double lo = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double hi = k < n ? u.values[static_cast<std::size_t>(k)] : 1.0;
            const double fn = static_cast<double>(k) / n;
            // antiderivative of (fn - u)^2 is -(fn - u)^3 / 3
            integral += ((fn - lo) * (fn - lo) * (fn - lo) - (fn - hi) * (fn - hi) * (fn - hi)) / 3.0;
            lo = hi;
        }
        EXPECT_NEAR(cm_statistic(u).value, n * integral, 1e-12) << "n=" << n;
    }
}

TEST(CmStatistic, LowerBound) {
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 1 + rep % 6;
        const auto u = test_util::random_sample(n, 333 + static_cast<std::uint64_t>(rep));
        EXPECT_GE(cm_statistic(u).value, 1.0 / (12.0 * n) - 1e-15);
    }
}

// ---- shared names -----------------------------------------------------------

TEST(TestKind, NamesRoundTrip) {
    for (auto kind : {TestKind::ad, TestKind::ad_asym, TestKind::ks, TestKind::cm})
        EXPECT_EQ(test_from_name(test_name(kind)), kind);
    EXPECT_THROW(test_from_name("nope"), std::invalid_argument);
}

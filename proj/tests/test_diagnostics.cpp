#include "gofbt/diagnostics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gofbt;

TEST(Cov, ClosedFormValues) {
    EXPECT_NEAR(coefficient_of_variation(1), std::sqrt(11.0 / 3.0) / 2.0, 1e-15);
    EXPECT_NEAR(coefficient_of_variation(1), 0.95743, 1e-5);
    EXPECT_NEAR(coefficient_of_variation(50), 0.1423, 1e-4);
    EXPECT_NEAR(coefficient_of_variation(100), 0.10032, 1e-5);
    EXPECT_NEAR(coefficient_of_variation(101), 0.09982, 1e-5);
}

TEST(Cov, TenPercentCrossingBetween100And101) {
    EXPECT_GT(coefficient_of_variation(100), 0.10);
    EXPECT_LT(coefficient_of_variation(101), 0.10);
}

TEST(Cov, StrictlyDecreasing) {
    for (int n = 1; n < 300; ++n)
        EXPECT_LT(coefficient_of_variation(n + 1), coefficient_of_variation(n));
}

TEST(Cov, InvalidSampleSize) {
    EXPECT_THROW(coefficient_of_variation(0), std::invalid_argument);
    EXPECT_THROW(coefficient_of_variation(-3), std::invalid_argument);
}

TEST(CovWarning, Flags) {
    EXPECT_TRUE(cov_warning(5, 0.10).warn);
    EXPECT_FALSE(cov_warning(101, 0.10).warn);
    EXPECT_FALSE(cov_warning(5, 1.0).warn);
    EXPECT_THROW(cov_warning(5, 0.0), std::invalid_argument);
}

TEST(CovWarning, SmallSampleCaveat) {
    EXPECT_FALSE(cov_warning(5).caveat.empty());
    EXPECT_TRUE(cov_warning(50).caveat.empty());
    EXPECT_DOUBLE_EQ(cov_warning(5).cov, coefficient_of_variation(5));
}

TEST(CovCurve, SinglePointAndRange) {
    const auto single = cov_curve(1, 1);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].first, 1);
    EXPECT_NEAR(single[0].second, 0.95743, 1e-5);

    const auto curve = cov_curve(1, 200);
    ASSERT_EQ(curve.size(), 200u);
    for (std::size_t i = 1; i < curve.size(); ++i)
        EXPECT_LT(curve[i].second, curve[i - 1].second);
    EXPECT_THROW(cov_curve(3, 2), std::invalid_argument);
}

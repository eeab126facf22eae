#include "gofbt/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace gofbt;

TEST(Rng, SameSeedSameStream) {
    rng::Xoshiro256 a(42), b(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, DerivedStreamsDiffer) {
    const auto s1 = rng::derive_stream(42, 0);
    const auto s2 = rng::derive_stream(42, 1);
    const auto s3 = rng::derive_stream(43, 0);
    EXPECT_NE(s1, s2);
    EXPECT_NE(s1, s3);
    EXPECT_EQ(s1, rng::derive_stream(42, 0));
}

TEST(Rng, UniformInOpenInterval) {
    rng::Xoshiro256 gen(7);
    for (int i = 0; i < 200000; ++i) {
        const double u = rng::uniform01(gen);
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, NormalMoments) {
    rng::Xoshiro256 gen(12345);
    const int n = 2000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng::normal(gen);
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.005);
    EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(Rng, GammaMoments) {
    for (const double shape : {1.4, 2.5, 5.0}) {
        rng::Xoshiro256 gen(99 + static_cast<std::uint64_t>(shape * 10));
        const int n = 500000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = rng::gamma(gen, shape);
            sum += g;
            sum2 += g * g;
        }
        const double mean = sum / n;
        const double var = sum2 / n - mean * mean;
        EXPECT_NEAR(mean, shape, 0.03 * shape);
        EXPECT_NEAR(var, shape, 0.05 * shape);
    }
}

TEST(Rng, StudentTVariance) {
    const double nu = 5.0;
    rng::Xoshiro256 gen(2718);
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = rng::student_t(gen, nu);
        sum += t;
        sum2 += t * t;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(var, nu / (nu - 2.0), 0.05);
}

TEST(Rng, NormalCdfValues) {
    EXPECT_NEAR(rng::normal_cdf(0.0), 0.5, 1e-15);
    EXPECT_NEAR(rng::normal_cdf(1.959963984540054), 0.975, 1e-9);
    EXPECT_NEAR(rng::normal_cdf(-1.959963984540054), 0.025, 1e-9);
    EXPECT_GT(rng::normal_cdf(-37.0), 0.0);
}

#include "gofbt/critical_values.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <numeric>

#include "test_util.hpp"

using namespace gofbt;

TEST(BuiltinTable, ExactValues) {
    const auto t = builtin_ad_table();
    EXPECT_DOUBLE_EQ(t.value_at_tail(0.250), 1.248);
    EXPECT_DOUBLE_EQ(t.value_at_tail(0.150), 1.610);
    EXPECT_DOUBLE_EQ(t.value_at_tail(0.100), 1.933);
    EXPECT_DOUBLE_EQ(t.value_at_tail(0.050), 2.492);
    EXPECT_DOUBLE_EQ(t.value_at_tail(0.010), 3.880);
    EXPECT_DOUBLE_EQ(t.value_at_tail(0.005), 4.500);
    EXPECT_DOUBLE_EQ(t.value_at_tail(0.001), 6.000);
    EXPECT_THROW(t.value_at_tail(0.123), std::invalid_argument);
}

TEST(BuiltinTable, MonotoneInTail) {
    const auto t = builtin_ad_table();
    EXPECT_GT(t.value_at_tail(0.010), t.value_at_tail(0.050));
    for (std::size_t i = 1; i < t.entries.size(); ++i) {
        EXPECT_LT(t.entries[i].first, t.entries[i - 1].first);
        EXPECT_GT(t.entries[i].second, t.entries[i - 1].second);
    }
}

TEST(CriticalValue, InterpolatedQuantiles) {
    NullDistribution d;
    d.kind = TestKind::ad;
    d.n = 1;
    d.sorted_draws.resize(100);
    std::iota(d.sorted_draws.begin(), d.sorted_draws.end(), 1.0);
    EXPECT_NEAR(critical_value(d, 0.05), 95.05, 1e-12);
    EXPECT_NEAR(critical_value(d, 0.5), 50.5, 1e-12);
    EXPECT_NEAR(critical_value(d, 1e-9), 100.0, 1e-5);  // confidence to 0 approaches the max draw
    EXPECT_THROW(critical_value(d, 0.0), std::invalid_argument);
    EXPECT_THROW(critical_value(d, 1.0), std::invalid_argument);
}

TEST(Decide, StrictInequality) {
    EXPECT_EQ(decide(GofStatistic{TestKind::ad, 3.0, 5}, 2.492), Verdict::reject);
    EXPECT_EQ(decide(GofStatistic{TestKind::ad, 2.492, 5}, 2.492), Verdict::accept);
    EXPECT_EQ(decide(GofStatistic{TestKind::ad, 0.1, 5}, 1.248), Verdict::accept);
}

TEST(SimulateNull, Reproducible) {
    const auto a = simulate_null(TestKind::ad, 5, 2000, 42, 1);
    const auto b = simulate_null(TestKind::ad, 5, 2000, 42, 2);
    ASSERT_EQ(a.sorted_draws.size(), b.sorted_draws.size());
    for (std::size_t i = 0; i < a.sorted_draws.size(); ++i)
        ASSERT_EQ(a.sorted_draws[i], b.sorted_draws[i]) << "thread count changed the draws";
    const auto c = simulate_null(TestKind::ad, 5, 2000, 43, 1);
    EXPECT_NE(a.sorted_draws, c.sorted_draws);
}

TEST(SimulateNull, ValidatesArguments) {
    EXPECT_THROW(simulate_null(TestKind::ad, 0, 2000, 1), std::invalid_argument);
    EXPECT_THROW(simulate_null(TestKind::ad, 5, 999, 1), std::invalid_argument);
}

TEST(SimulateNull, WorksAtSampleSizeOne) {
    const auto d = simulate_null(TestKind::ks, 1, 1000, 7);
    EXPECT_EQ(d.trials(), 1000);
    for (double x : d.sorted_draws) {
        EXPECT_GE(x, 0.5);
        EXPECT_LT(x, 1.0);
    }
    // A single central PIT cannot reject at the 5% level.
    EXPECT_GT(critical_value(d, 0.05), 0.5);
}

TEST(SimulateNull, PinnedSmallSampleQuantile) {
    // Frozen from the first verified run of this generator; guards against
    // accidental changes to the statistic or the stream derivation.
    const auto d = simulate_null(TestKind::ad_asym, 5, 100000, 20240001, 2);
    EXPECT_NEAR(critical_value(d, 0.05), 19.273239922609342, 1e-9);
}

TEST(NullCsv, RoundTrip) {
    const auto d = simulate_null(TestKind::cm, 3, 1000, 11);
    const auto path = std::filesystem::temp_directory_path() / "gofbt_null_roundtrip.csv";
    csv::write_file(path.string(), null_to_csv(d));
    const auto back = null_from_csv(path.string());
    EXPECT_EQ(back.kind, d.kind);
    EXPECT_EQ(back.n, d.n);
    EXPECT_EQ(back.seed, d.seed);
    ASSERT_EQ(back.sorted_draws.size(), d.sorted_draws.size());
    for (std::size_t i = 0; i < d.sorted_draws.size(); ++i)
        ASSERT_EQ(back.sorted_draws[i], d.sorted_draws[i]);
    std::filesystem::remove(path);
}

TEST(ThresholdProvider, DiskCacheHit) {
    const auto dir = std::filesystem::temp_directory_path() / "gofbt_cache_test";
    std::filesystem::remove_all(dir);
    ThresholdProvider first(5, 1000, 1, dir.string());
    const double t1 = first.threshold(TestKind::ks, 4, 0.05);
    ASSERT_FALSE(std::filesystem::is_empty(dir));
    ThresholdProvider second(5, 1000, 1, dir.string());
    EXPECT_EQ(second.threshold(TestKind::ks, 4, 0.05), t1);
    std::filesystem::remove_all(dir);
}

TEST(TableCsv, ContainsEntries) {
    const auto table = table_from_null(simulate_null(TestKind::ad, 4, 2000, 3));
    const auto text = table_to_csv(table);
    EXPECT_NE(text.find("tail_prob,value"), std::string::npos);
    EXPECT_NE(text.find("ad,4,2000,3"), std::string::npos);
}

TEST(SizeControl, LightCheck) {
    // Fresh null samples against a Monte Carlo threshold should reject at
    // about the nominal rate.
    ThresholdProvider provider(77, 20000, 2);
    const double cut = provider.threshold(TestKind::ad, 20, 0.05);
    int rejections = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        const auto u = test_util::random_sample(20, rng::derive_stream(1234, t));
        if (decide(ad_statistic(u), cut) == Verdict::reject) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / trials;
    EXPECT_NEAR(rate, 0.05, 0.015);
}

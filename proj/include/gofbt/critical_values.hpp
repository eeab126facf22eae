#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gofbt/csv.hpp"
#include "gofbt/parallel.hpp"
#include "gofbt/rng.hpp"
#include "gofbt/statistics.hpp"

namespace gofbt {

/// Sorted Monte Carlo draws of a test statistic under the uniform null.
struct NullDistribution {
    TestKind kind;
    int n = 0;
    std::vector<double> sorted_draws;
    std::uint64_t seed = 0;

    int trials() const { return static_cast<int>(sorted_draws.size()); }
};

enum class Provenance { builtin_table, monte_carlo };

/// Rejection thresholds per upper-tail probability, descending tail order.
struct CriticalTable {
    TestKind kind;
    Provenance provenance = Provenance::monte_carlo;
    int n = 0;            // 0 for the asymptotic built-in table
    int trials = 0;       // 0 for the built-in table
    std::uint64_t seed = 0;
    std::vector<std::pair<double, double>> entries;  // (tail_prob, value)

    double value_at_tail(double tail) const {
        for (const auto& [t, v] : entries)
            if (std::abs(t - tail) < 1e-12) return v;
        throw std::invalid_argument("tail probability not tabulated");
    }
};

/// Asymptotic upper-tail percentiles of the Anderson-Darling statistic.
inline CriticalTable builtin_ad_table() {
    CriticalTable t;
    t.kind = TestKind::ad;
    t.provenance = Provenance::builtin_table;
    t.entries = {{0.250, 1.248}, {0.150, 1.610}, {0.100, 1.933}, {0.050, 2.492},
                 {0.010, 3.880}, {0.005, 4.500}, {0.001, 6.000}};
    return t;
}

/// Simulates the null distribution of a statistic at sample size n.
/// Each trial derives its own random stream from (seed, trial index), so the
/// result is identical for any thread count.
inline NullDistribution simulate_null(TestKind kind, int n, int trials, std::uint64_t seed,
                                      int threads = 0) {
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
    if (trials < 1000) throw std::invalid_argument("trials must be >= 1000");
    NullDistribution dist;
    dist.kind = kind;
    dist.n = n;
    dist.seed = seed;
    dist.sorted_draws.resize(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        rng::Xoshiro256 gen(rng::derive_stream(seed, t, static_cast<std::uint64_t>(n), 0x6e756c6cULL));
        std::vector<double> u(static_cast<std::size_t>(n));
        for (auto& x : u) x = rng::uniform01(gen);
        dist.sorted_draws[t] = compute_statistic(kind, ProbSample::from(std::move(u))).value;
    });
    std::sort(dist.sorted_draws.begin(), dist.sorted_draws.end());
    return dist;
}

/// Empirical (1-confidence)-quantile of the sorted draws, with linear
/// interpolation between adjacent order statistics.
inline double critical_value(const NullDistribution& dist, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence must be in (0,1)");
    const auto& d = dist.sorted_draws;
    if (d.empty()) throw std::invalid_argument("empty null distribution");
    const double q = 1.0 - confidence;
    const double h = q * (static_cast<double>(d.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= d.size()) return d.back();
    const double frac = h - static_cast<double>(lo);
    return d[lo] + frac * (d[lo + 1] - d[lo]);
}

enum class Verdict { accept, reject };

inline const char* verdict_name(Verdict v) { return v == Verdict::reject ? "reject" : "accept"; }

/// Rejects when the statistic strictly exceeds the threshold; equality keeps
/// the null.
inline Verdict decide(const GofStatistic& statistic, double threshold) {
    if (!std::isfinite(statistic.value)) throw std::invalid_argument("statistic is not finite");
    return statistic.value > threshold ? Verdict::reject : Verdict::accept;
}

inline CriticalTable table_from_null(const NullDistribution& dist,
                                     const std::vector<double>& tails = {0.250, 0.150, 0.100,
                                                                         0.050, 0.010, 0.005,
                                                                         0.001}) {
    CriticalTable t;
    t.kind = dist.kind;
    t.provenance = Provenance::monte_carlo;
    t.n = dist.n;
    t.trials = dist.trials();
    t.seed = dist.seed;
    for (double tail : tails) t.entries.emplace_back(tail, critical_value(dist, tail));
    return t;
}

// ---- CSV serialization --------------------------------------------------

inline std::string null_to_csv(const NullDistribution& d) {
    std::ostringstream out;
    out << "test,n,trials,seed\n"
        << test_name(d.kind) << ',' << d.n << ',' << d.trials() << ',' << d.seed << '\n';
    for (double x : d.sorted_draws) out << csv::format_full(x) << '\n';
    return out.str();
}

inline NullDistribution null_from_csv(const std::string& path) {
    const auto lines = csv::read_lines(path);
    if (lines.size() < 3 || lines[0] != "test,n,trials,seed")
        throw std::runtime_error("malformed null distribution file: " + path);
    const auto meta = csv::split(lines[1]);
    NullDistribution d;
    d.kind = test_from_name(meta.at(0));
    d.n = std::stoi(meta.at(1));
    const int trials = std::stoi(meta.at(2));
    d.seed = std::stoull(meta.at(3));
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (csv::strip(lines[i]).empty()) continue;
        d.sorted_draws.push_back(std::stod(lines[i]));
    }
    if (static_cast<int>(d.sorted_draws.size()) != trials)
        throw std::runtime_error("null distribution file truncated: " + path);
    return d;
}

inline std::string table_to_csv(const CriticalTable& t) {
    std::ostringstream out;
    out << "test,n,trials,seed\n"
        << test_name(t.kind) << ',' << t.n << ',' << t.trials << ',' << t.seed << '\n';
    out << "tail_prob,value\n";
    for (const auto& [tail, value] : t.entries)
        out << csv::format(tail) << ',' << csv::format_full(value) << '\n';
    return out.str();
}

/// Provides per-(test, n) rejection thresholds backed by Monte Carlo null
/// distributions at the actual sample size. Distributions are memoized in
/// process and optionally cached on disk under cache_dir, keyed by
/// (test, n, trials, seed).
class ThresholdProvider {
  public:
    ThresholdProvider(std::uint64_t seed, int trials = 100000, int threads = 0,
                      std::optional<std::string> cache_dir = std::nullopt)
        : seed_(seed), trials_(trials), threads_(threads), cache_dir_(std::move(cache_dir)) {}

    const NullDistribution& null_distribution(TestKind kind, int n) {
        const auto key = std::make_pair(kind, n);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;

        const std::uint64_t stream = rng::derive_stream(seed_, static_cast<std::uint64_t>(kind),
                                                        static_cast<std::uint64_t>(n), 0x74687265ULL);
        if (cache_dir_) {
            const auto path = cache_path(kind, n, stream);
            if (std::filesystem::exists(path)) {
                auto loaded = null_from_csv(path.string());
                return memo_.emplace(key, std::move(loaded)).first->second;
            }
            auto dist = simulate_null(kind, n, trials_, stream, threads_);
            std::filesystem::create_directories(*cache_dir_);
            csv::write_file(path.string(), null_to_csv(dist));
            return memo_.emplace(key, std::move(dist)).first->second;
        }
        return memo_.emplace(key, simulate_null(kind, n, trials_, stream, threads_)).first->second;
    }

    double threshold(TestKind kind, int n, double confidence) {
        return critical_value(null_distribution(kind, n), confidence);
    }

    int trials() const { return trials_; }

  private:
    std::filesystem::path cache_path(TestKind kind, int n, std::uint64_t stream) const {
        std::ostringstream name;
        name << test_name(kind) << "_n" << n << "_t" << trials_ << "_s" << stream << ".csv";
        return std::filesystem::path(*cache_dir_) / name.str();
    }

    std::uint64_t seed_;
    int trials_;
    int threads_;
    std::optional<std::string> cache_dir_;
    std::map<std::pair<TestKind, int>, NullDistribution> memo_;
};

}  // namespace gofbt

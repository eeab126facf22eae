#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gofbt/critical_values.hpp"
#include "gofbt/diagnostics.hpp"
#include "gofbt/hp_filter.hpp"
#include "gofbt/ou.hpp"
#include "gofbt/prob_sample.hpp"
#include "gofbt/rate_series.hpp"
#include "gofbt/statistics.hpp"

namespace gofbt {

/// Signed volatility comparison of two horizon-consistent standard
/// deviations (simulation vs backtest-window): ln(sd_sim / sd_bkt).
/// Positive values mean the backtest window underestimates the volatility.
inline double delta_ratio(double sd_sim, double sd_bkt) {
    if (!(sd_sim > 0.0) || !(sd_bkt > 0.0))
        throw std::invalid_argument("delta_ratio requires positive volatilities");
    return std::log(sd_sim) - std::log(sd_bkt);
}

struct BacktestConfig {
    double calibration_window_years = 3.0;
    double horizon_years = 2.0;
    int n_scenarios = 3000;
    std::vector<std::string> backtest_dates;  // explicit ISO dates; empty = stride rule
    double confidence = 0.05;
    double gamma = 1.0;
    std::vector<TestKind> tests = {TestKind::ad, TestKind::ad_asym, TestKind::ks};
    std::uint64_t seed = 42;
    int threshold_trials = 100000;
    double hp_lambda = 0.0;  // 0 = frequency-adjusted default for the series dt
    double cov_threshold = 0.10;
    int threads = 0;

    void validate() const {
        if (!(calibration_window_years > 0.0)) throw std::invalid_argument("window must be positive");
        if (!(horizon_years > 0.0)) throw std::invalid_argument("horizon must be positive");
        if (n_scenarios < 1) throw std::invalid_argument("n_scenarios must be >= 1");
        if (!(confidence > 0.0 && confidence < 1.0))
            throw std::invalid_argument("confidence must be in (0,1)");
        if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
        if (tests.empty()) throw std::invalid_argument("at least one test required");
    }
};

struct BacktestRecord {
    std::int64_t date = 0;              // forecast origin
    OuParams params;                    // window calibration with gamma applied
    double window_sigma = 0.0;          // window calibration before gamma
    double cycle_origin = 0.0;          // log-cycle value at the origin
    double forecast_min = 0.0;
    double forecast_mean = 0.0;
    double forecast_max = 0.0;
    double realized = 0.0;
    double pit = 0.0;
};

struct TestOutcome {
    GofStatistic statistic;
    double threshold = 0.0;
    Verdict verdict = Verdict::accept;
};

struct BacktestOutcome {
    std::vector<BacktestRecord> records;
    std::map<TestKind, TestOutcome> tests;
    CovReport cov;
    OuParams full_sample_params;  // whole-series calibration, no gamma
    HpDecomposition full_hp;      // whole-series log-rate decomposition
    double delta_log = 0.0;       // mean over records of ln(sd_sim/sd_bkt)
    double delta_plain = 1.0;     // exp(delta_log)
    std::vector<std::string> warnings;
    BacktestConfig config;
    double dt_years = 0.0;
};

namespace detail {

inline std::vector<double> log_values(const RateSeries& series, std::size_t begin, std::size_t end) {
    std::vector<double> out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        if (!(series.values[i] > 0.0))
            throw std::invalid_argument("rates must be positive for the lognormal pipeline");
        out.push_back(std::log(series.values[i]));
    }
    return out;
}

inline std::vector<std::size_t> resolve_backtest_indices(const RateSeries& series,
                                                         const BacktestConfig& config,
                                                         std::size_t window_steps,
                                                         std::size_t horizon_steps) {
    std::vector<std::size_t> indices;
    if (!config.backtest_dates.empty()) {
        for (const auto& iso : config.backtest_dates) {
            const std::int64_t serial = dates::parse_iso(iso);
            const auto it = std::lower_bound(series.dates.begin(), series.dates.end(), serial);
            if (it == series.dates.end() || *it != serial)
                throw std::invalid_argument("backtest date not on the series grid: " + iso);
            indices.push_back(static_cast<std::size_t>(it - series.dates.begin()));
        }
        std::sort(indices.begin(), indices.end());
    } else {
        for (std::size_t t = window_steps; t + horizon_steps < series.size(); t += horizon_steps)
            indices.push_back(t);
    }
    if (indices.empty() || series.size() <= window_steps) {
        throw std::runtime_error("insufficient history: series shorter than the calibration window");
    }
    if (indices.front() < window_steps) {
        throw std::runtime_error("insufficient history before first backtest date; first feasible date is " +
                                 dates::format_iso(series.dates[window_steps]));
    }
    for (std::size_t i = 1; i < indices.size(); ++i) {
        if (indices[i] - indices[i - 1] < horizon_steps)
            throw std::invalid_argument("backtest dates overlap: spacing must be at least one horizon");
    }
    return indices;
}

}  // namespace detail

/// Rolling-origin backtest of the lognormal mean-reverting rate model.
/// Per origin: detrend the trailing window of log-rates, calibrate the
/// cycle, widen the volatility by gamma, jump the cycle to the horizon with
/// the exact transition for n_scenarios draws, recombine with the trend
/// frozen at the origin, and map the realized rate to its p-value within the
/// scenario set. The collected p-values feed every configured test against
/// Monte Carlo thresholds at the realized record count.
inline BacktestOutcome run_backtest(const RateSeries& series, const BacktestConfig& config,
                                    ThresholdProvider* shared_provider = nullptr) {
    series.validate();
    config.validate();
    const double dt = series.dt_years;
    const auto window_steps = static_cast<std::size_t>(std::llround(config.calibration_window_years / dt));
    const auto horizon_steps = static_cast<std::size_t>(std::llround(config.horizon_years / dt));
    if (window_steps < 3) throw std::invalid_argument("calibration window too short for the series step");
    if (horizon_steps < 1) throw std::invalid_argument("horizon shorter than the series step");

    const double lambda = config.hp_lambda > 0.0 ? config.hp_lambda : hp_default_lambda(dt);
    const auto indices = detail::resolve_backtest_indices(series, config, window_steps, horizon_steps);

    BacktestOutcome out;
    out.config = config;
    out.dt_years = dt;

    for (const std::size_t ti : indices) {
        const auto window_log = detail::log_values(series, ti - window_steps, ti + 1);
        const HpDecomposition hp = hp_filter(window_log, lambda);
        const OuParams window_params = calibrate_moment_matching(hp.cycle, dt);
        const OuParams sim_params = volatility_adjust(window_params, config.gamma);

        const std::size_t ri = ti + horizon_steps;
        if (ri >= series.size()) {
            out.warnings.push_back("no realized value " + std::to_string(config.horizon_years) +
                                   "y after " + dates::format_iso(series.dates[ti]) +
                                   "; record skipped");
            continue;
        }

        const OuTransition trans = ou_transition(sim_params, hp.cycle.back(), config.horizon_years);
        rng::Xoshiro256 gen(rng::derive_stream(config.seed, ti, 0x7363656eULL));
        std::vector<double> terminal(static_cast<std::size_t>(config.n_scenarios));
        for (auto& y : terminal) y = trans.mean + trans.sd * rng::normal(gen);
        const std::vector<double> scenarios = compose_rate(terminal, hp.trend.back());

        BacktestRecord rec;
        rec.date = series.dates[ti];
        rec.params = sim_params;
        rec.window_sigma = window_params.sigma;
        rec.cycle_origin = hp.cycle.back();
        rec.forecast_min = *std::min_element(scenarios.begin(), scenarios.end());
        rec.forecast_max = *std::max_element(scenarios.begin(), scenarios.end());
        double sum = 0.0;
        for (double s : scenarios) sum += s;
        rec.forecast_mean = sum / static_cast<double>(scenarios.size());
        rec.realized = series.values[ri];
        rec.pit = pit_map(rec.realized, ForecastSet{scenarios});
        out.records.push_back(rec);
    }

    if (out.records.empty())
        throw std::runtime_error("no backtest records produced (all realizations missing)");

    std::vector<double> pits;
    pits.reserve(out.records.size());
    for (const auto& r : out.records) pits.push_back(r.pit);
    const ProbSample sample = ProbSample::from(pits);
    const int n = sample.n();

    std::optional<ThresholdProvider> local;
    ThresholdProvider* provider = shared_provider;
    if (provider == nullptr) {
        local.emplace(config.seed, config.threshold_trials, config.threads);
        provider = &*local;
    }
    for (TestKind kind : config.tests) {
        TestOutcome r{compute_statistic(kind, sample),
                      provider->threshold(kind, n, config.confidence), Verdict::accept};
        r.verdict = decide(r.statistic, r.threshold);
        out.tests.emplace(kind, r);
    }
    out.cov = cov_warning(n, config.cov_threshold);

    // Volatility diagnostic: whole-sample calibration against each window
    // calibration, both mapped to horizon standard deviations with the
    // shared reversion speed and mean level so only sigma differs.
    const auto full_log = detail::log_values(series, 0, series.size());
    out.full_hp = hp_filter(full_log, lambda);
    out.full_sample_params = calibrate_moment_matching(out.full_hp.cycle, dt);
    double delta_sum = 0.0;
    for (const auto& r : out.records) {
        OuParams sim = out.full_sample_params;
        OuParams bkt = out.full_sample_params;
        bkt.sigma = r.window_sigma;
        const double x0 = std::exp(r.cycle_origin);
        delta_sum += delta_ratio(bk_sd(sim, x0, config.horizon_years),
                                 bk_sd(bkt, x0, config.horizon_years));
    }
    out.delta_log = delta_sum / static_cast<double>(out.records.size());
    out.delta_plain = std::exp(out.delta_log);
    return out;
}

// ---- serialization ------------------------------------------------------

inline std::string backtest_meta_block(const BacktestOutcome& o) {
    std::ostringstream m;
    m << "# seed=" << o.config.seed << " gamma=" << csv::format(o.config.gamma)
      << " window_years=" << csv::format(o.config.calibration_window_years)
      << " horizon_years=" << csv::format(o.config.horizon_years)
      << " n_scenarios=" << o.config.n_scenarios
      << " confidence=" << csv::format(o.config.confidence)
      << " dt_years=" << csv::format(o.dt_years)
      << " units=decimal-rates,trading-years"
      << " pipeline=hp(log-rate)->calibrate(cycle)->exact-jump->exp(trend+cycle)\n";
    return m.str();
}

/// Trend/cycle decomposition of the log-rate series: rate is the level,
/// trend + cycle = ln(rate).
inline std::string hp_decomposition_to_csv(const RateSeries& series, const HpDecomposition& hp) {
    if (hp.trend.size() != series.size())
        throw std::invalid_argument("decomposition length does not match the series");
    std::ostringstream out;
    out << "# lambda=" << csv::format(hp.lambda) << " space=log-rate\n";
    out << "date,rate,trend,cycle\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << dates::format_iso(series.dates[i]) << ',' << csv::format(series.values[i]) << ','
            << csv::format(hp.trend[i]) << ',' << csv::format(hp.cycle[i]) << '\n';
    }
    return out.str();
}

inline std::string records_to_csv(const BacktestOutcome& o) {
    std::ostringstream out;
    out << backtest_meta_block(o);
    out << "date,alpha,k,sigma,fmin,fmean,fmax,realized,pit\n";
    for (const auto& r : o.records) {
        out << dates::format_iso(r.date) << ',' << csv::format(r.params.alpha) << ','
            << csv::format(r.params.k) << ',' << csv::format(r.params.sigma) << ','
            << csv::format(r.forecast_min) << ',' << csv::format(r.forecast_mean) << ','
            << csv::format(r.forecast_max) << ',' << csv::format(r.realized) << ','
            << csv::format(r.pit) << '\n';
    }
    return out.str();
}

}  // namespace gofbt

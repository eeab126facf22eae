#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gofbt/parallel.hpp"
#include "gofbt/rng.hpp"

namespace gofbt {

/// Mean-reverting (Ornstein-Uhlenbeck) parameters for the log-cycle
///   dy = k (alpha - y) dt + sigma dW.
/// k and sigma are per unit of the time convention the caller uses (years
/// here throughout the backtesting pipeline; per-step when dt = 1).
struct OuParams {
    double alpha = 0.0;
    double k = 0.0;
    double sigma = 0.0;

    void validate() const {
        if (!(k > 0.0)) throw std::invalid_argument("mean reversion speed k must be positive");
        if (!(sigma > 0.0)) throw std::invalid_argument("volatility sigma must be positive");
    }
};

/// Conditional distribution of y_{t0+t} given y_{t0} = y0 (exact, no
/// discretization error).
struct OuTransition {
    double mean;
    double sd;
};

inline OuTransition ou_transition(const OuParams& p, double y0, double t) {
    p.validate();
    if (t < 0.0) throw std::invalid_argument("horizon must be nonnegative");
    const double decay = std::exp(-p.k * t);
    const double var = p.sigma * p.sigma * (-std::expm1(-2.0 * p.k * t)) / (2.0 * p.k);
    return OuTransition{p.alpha + (y0 - p.alpha) * decay, std::sqrt(var)};
}

/// Path matrix in row-major layout: path index row, step index column
/// (column 0 holds y0).
struct PathMatrix {
    int n_paths = 0;
    int n_steps = 0;  // number of increments; columns = n_steps + 1
    std::vector<double> data;

    double& at(int path, int step) {
        return data[static_cast<std::size_t>(path) * (n_steps + 1) + step];
    }
    double at(int path, int step) const {
        return data[static_cast<std::size_t>(path) * (n_steps + 1) + step];
    }
};

/// Simulates OU paths with the exact transition per step. Path p step s uses
/// a random stream derived from (seed, p), so results are independent of the
/// thread schedule.
inline PathMatrix simulate_ou(const OuParams& p, double y0, double dt, int steps, int n_paths,
                              std::uint64_t seed, int threads = 0) {
    p.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (steps < 1 || n_paths < 1) throw std::invalid_argument("steps and n_paths must be >= 1");
    const double decay = std::exp(-p.k * dt);
    const double step_sd =
        p.sigma * std::sqrt((-std::expm1(-2.0 * p.k * dt)) / (2.0 * p.k));
    PathMatrix m;
    m.n_paths = n_paths;
    m.n_steps = steps;
    m.data.resize(static_cast<std::size_t>(n_paths) * (steps + 1));
    parallel_for(static_cast<std::size_t>(n_paths), threads, [&](std::size_t path) {
        rng::Xoshiro256 gen(rng::derive_stream(seed, path, 0x6f755f70617468ULL));
        double y = y0;
        m.at(static_cast<int>(path), 0) = y;
        for (int s = 1; s <= steps; ++s) {
            y = p.alpha + (y - p.alpha) * decay + step_sd * rng::normal(gen);
            m.at(static_cast<int>(path), s) = y;
        }
    });
    return m;
}

/// Terminal values only; one exact jump to the horizon.
inline std::vector<double> simulate_ou_terminal(const OuParams& p, double y0, double t,
                                                int n_paths, std::uint64_t seed, int threads = 0) {
    const OuTransition tr = ou_transition(p, y0, t);
    std::vector<double> out(static_cast<std::size_t>(n_paths));
    parallel_for(out.size(), threads, [&](std::size_t path) {
        rng::Xoshiro256 gen(rng::derive_stream(seed, path, 0x6f755f7465726dULL));
        out[path] = tr.mean + tr.sd * rng::normal(gen);
    });
    return out;
}

/// Two-step moment matching on a uniformly sampled series: alpha is the
/// sample mean; the per-step reversion rate is
///   sum (dy)^2 / (2 sum (y - alpha)^2),
/// converted to the caller's time unit by dividing by dt; sigma comes from
/// the realized quadratic variation sum (dy)^2 / (m dt) with m increments.
inline OuParams calibrate_moment_matching(std::span<const double> y, double dt) {
    if (y.size() < 3) throw std::invalid_argument("calibration needs at least 3 observations");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const std::size_t n = y.size();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    double qv = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = y[i] - y[i - 1];
        qv += d * d;
    }
    double dev2 = 0.0;
    for (double v : y) {
        const double d = v - mean;
        dev2 += d * d;
    }
    if (!(dev2 > 0.0) || !(qv > 0.0))
        throw std::runtime_error("degenerate series: k undefined");

    OuParams p;
    p.alpha = mean;
    p.k = qv / (2.0 * dev2) / dt;
    p.sigma = std::sqrt(qv / (static_cast<double>(n - 1) * dt));
    p.validate();
    return p;
}

/// Variance of X_t = exp(y_t) when y follows the OU dynamics and
/// X_0 = x0 > 0. Lognormal moments of the exact transition:
///   E[X_t]   = exp(m + v/2),  E[X_t^2] = exp(2m + 2v),
/// with m = ln(x0) e^{-kt} + alpha (1 - e^{-kt}) and
/// v = sigma^2 (1 - e^{-2kt}) / (2k). Computed as
/// exp(2m + v) * expm1(v) to avoid cancellation for small v.
inline double bk_variance(const OuParams& p, double x0, double t) {
    p.validate();
    if (!(x0 > 0.0)) throw std::invalid_argument("x0 must be positive");
    if (t < 0.0) throw std::invalid_argument("horizon must be nonnegative");
    if (t == 0.0) return 0.0;
    const double decay = std::exp(-p.k * t);
    const double m = std::log(x0) * decay + p.alpha * (1.0 - decay);
    const double v = p.sigma * p.sigma * (-std::expm1(-2.0 * p.k * t)) / (2.0 * p.k);
    return std::exp(2.0 * m + v) * std::expm1(v);
}

inline double bk_mean(const OuParams& p, double x0, double t) {
    p.validate();
    if (!(x0 > 0.0)) throw std::invalid_argument("x0 must be positive");
    if (t < 0.0) throw std::invalid_argument("horizon must be nonnegative");
    const double decay = std::exp(-p.k * t);
    const double m = std::log(x0) * decay + p.alpha * (1.0 - decay);
    const double v = p.sigma * p.sigma * (-std::expm1(-2.0 * p.k * t)) / (2.0 * p.k);
    return std::exp(m + 0.5 * v);
}

inline double bk_sd(const OuParams& p, double x0, double t) {
    return std::sqrt(bk_variance(p, x0, t));
}

/// Scales the volatility by gamma, leaving mean level and reversion speed
/// unchanged.
inline OuParams volatility_adjust(const OuParams& p, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    OuParams out = p;
    out.sigma = gamma * p.sigma;
    return out;
}

/// Recombines simulated log-cycle values with the (frozen) log-trend level:
/// rate = exp(trend + cycle).
inline std::vector<double> compose_rate(std::span<const double> cycle_values, double log_trend) {
    if (!std::isfinite(log_trend)) throw std::invalid_argument("trend value must be finite");
    std::vector<double> out(cycle_values.size());
    for (std::size_t i = 0; i < cycle_values.size(); ++i)
        out[i] = std::exp(log_trend + cycle_values[i]);
    return out;
}

}  // namespace gofbt

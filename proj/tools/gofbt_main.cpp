// gofbt: goodness-of-fit statistics and risk-factor backtesting from the
// command line. See README.md for the file formats.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gofbt/backtest.hpp"
#include "gofbt/critical_values.hpp"
#include "gofbt/csv.hpp"
#include "gofbt/diagnostics.hpp"
#include "gofbt/experiments.hpp"
#include "gofbt/ou.hpp"
#include "gofbt/rate_series.hpp"
#include "gofbt/statistics.hpp"
#include "gofbt/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<std::string> cache_dir_from_env() {
    const char* dir = std::getenv("GOFBT_CACHE_DIR");
    if (dir != nullptr && *dir != '\0') return std::string(dir);
    return std::nullopt;
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Collects resolved configuration, input digests and written outputs, then
/// writes manifest.json as the final artifact of the run. A failed run never
/// reaches the manifest write, so undeclared partial outputs are detectable.
class RunManifest {
  public:
    RunManifest(std::string command, std::string out_dir)
        : command_(std::move(command)), out_dir_(std::move(out_dir)) {
        fs::create_directories(out_dir_);
    }

    json& config() { return config_; }

    void add_input(const std::string& path) {
        inputs_.push_back({{"path", path}, {"digest_fnv1a64", gofbt::csv::fnv1a64_hex(path)}});
    }

    std::string write_output(const std::string& name, const std::string& content) {
        const fs::path p = fs::path(out_dir_) / name;
        gofbt::csv::write_file(p.string(), content);
        outputs_.push_back(p.string());
        return p.string();
    }

    void set_seed(std::uint64_t seed) { seed_ = seed; }

    void finalize() {
        json m;
        m["command"] = command_;
        m["config"] = config_;
        m["seed"] = seed_;
        m["inputs"] = inputs_;
        m["outputs"] = outputs_;
        m["timestamp"] = iso_timestamp();
        const fs::path p = fs::path(out_dir_) / "manifest.json";
        gofbt::csv::write_file(p.string(), m.dump(2) + "\n");
    }

  private:
    std::string command_;
    std::string out_dir_;
    std::uint64_t seed_ = 0;
    json config_;
    json inputs_ = json::array();
    json outputs_ = json::array();
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

// The config file is applied to the option defaults before parsing, so the
// precedence is: command-line flag > --config file entry > built-in default.
std::string prescan_config_path(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") return argv[i + 1];
    return "";
}

std::vector<gofbt::TestKind> parse_tests(const std::vector<std::string>& names) {
    std::vector<gofbt::TestKind> kinds;
    for (const auto& n : names) {
        if (n == "all") {
            return {gofbt::TestKind::ad, gofbt::TestKind::ad_asym, gofbt::TestKind::ks,
                    gofbt::TestKind::cm};
        }
        kinds.push_back(gofbt::test_from_name(n));
    }
    return kinds;
}

std::vector<double> read_pit_csv(const std::string& path) {
    const auto lines = gofbt::csv::read_lines(path);
    std::vector<double> pits;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string line = gofbt::csv::strip(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        if (i == 0 && (line == "pit" || line == "u" || line == "value")) continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(line, &used);
            if (used != line.size()) throw std::invalid_argument("trailing characters");
            pits.push_back(v);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(i + 1) +
                                     ": expected one probability per row, got '" + line + "'");
        }
    }
    if (pits.empty()) throw std::runtime_error(path + ": no probabilities found");
    return pits;
}

// ---- experiment figure drivers -------------------------------------------

struct ExperimentOpts {
    int trials = 10000;
    int threshold_trials = 100000;
    int scenarios = 3000;
    double confidence = 0.05;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string data;
    double dt_override = 0.0;
};

const std::vector<int> kSampleGrid = {5, 10, 20, 50, 100, 150};
const std::vector<double> kSigmaGrid = {0.5, 2.0 / 3.0, 0.75, 1.0, 1.25, 1.5, 2.0};

gofbt::ExperimentResult sigma_sweep(gofbt::TestKind kind, const ExperimentOpts& opt,
                                    gofbt::ThresholdProvider& thresholds) {
    gofbt::ExperimentResult all;
    for (double sigma : kSigmaGrid) {
        gofbt::ScenarioGrid grid;
        grid.mu = 0.0;
        grid.sigma = sigma;
        grid.sample_sizes = {5, 10, 20, 100};
        grid.trials = opt.trials;
        grid.confidence = opt.confidence;
        grid.tests = {kind};
        grid.seed = opt.seed;
        grid.threads = opt.threads;
        auto res = gofbt::rejection_rate_gaussian(grid, thresholds);
        all.rows.insert(all.rows.end(), res.rows.begin(), res.rows.end());
    }
    return all;
}

std::string sigma_sweep_svg(const gofbt::ExperimentResult& res, const std::string& title) {
    gofbt::svg::LineChart chart(title, "alternative sigma", "rejection rate");
    for (int n : {5, 10, 20, 100}) {
        std::vector<double> xs, ys;
        for (const auto& r : res.rows)
            if (r.n == n) {
                xs.push_back(r.sigma_or_nu);
                ys.push_back(r.rejection_rate);
            }
        chart.add_series("n=" + std::to_string(n), xs, ys);
    }
    return chart.render();
}

gofbt::ExperimentResult panel_comparison(double mu, double sigma, const ExperimentOpts& opt,
                                         gofbt::ThresholdProvider& thresholds) {
    gofbt::ScenarioGrid grid;
    grid.mu = mu;
    grid.sigma = sigma;
    grid.sample_sizes = kSampleGrid;
    grid.trials = opt.trials;
    grid.confidence = opt.confidence;
    grid.seed = opt.seed;
    grid.threads = opt.threads;
    return gofbt::rejection_rate_gaussian(grid, thresholds);
}

std::string n_sweep_svg(const gofbt::ExperimentResult& res, const std::string& title,
                        const std::vector<gofbt::TestKind>& tests) {
    gofbt::svg::LineChart chart(title, "sample size n", "rejection rate");
    for (auto kind : tests) {
        std::vector<double> xs, ys;
        for (const auto& r : res.rows)
            if (r.test == kind) {
                xs.push_back(r.n);
                ys.push_back(r.rejection_rate);
            }
        chart.add_series(gofbt::test_name(kind), xs, ys);
    }
    return chart.render();
}

std::string fict_bins_csv(const gofbt::FictitiousResult& res, int n_bins) {
    std::ostringstream out;
    out << "horizon_years,test,delta_lo,delta_hi,delta_center,count,rejection_rate\n";
    const auto bins = res.bins(n_bins);
    for (std::size_t ti = 0; ti < res.tests.size(); ++ti) {
        for (const auto& b : bins) {
            out << gofbt::csv::format(res.horizon_years) << ',' << gofbt::test_name(res.tests[ti])
                << ',' << gofbt::csv::format(b.lo) << ',' << gofbt::csv::format(b.hi) << ','
                << gofbt::csv::format(b.center()) << ',' << b.count << ','
                << gofbt::csv::format(b.rejection_rate[ti]) << '\n';
        }
    }
    return out.str();
}

std::string fict_bins_svg(const gofbt::FictitiousResult& res, int n_bins, const std::string& title) {
    gofbt::svg::LineChart chart(title, "volatility underestimation (log ratio)", "rejection rate");
    const auto bins = res.bins(n_bins);
    for (std::size_t ti = 0; ti < res.tests.size(); ++ti) {
        std::vector<double> xs, ys;
        for (const auto& b : bins) {
            if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.count == 0) continue;
            xs.push_back(b.center());
            ys.push_back(b.rejection_rate[ti]);
        }
        chart.add_series(gofbt::test_name(res.tests[ti]), xs, ys);
    }
    return chart.render();
}

int run_experiment(const std::string& figure, const ExperimentOpts& opt, RunManifest& manifest) {
    gofbt::ThresholdProvider thresholds(opt.seed, opt.threshold_trials, opt.threads,
                                        cache_dir_from_env());
    json& files = manifest.config()["files"];

    if (figure == "fig1") {
        const auto curve = gofbt::cov_curve(1, 200);
        std::ostringstream out;
        out << "n,cov\n";
        for (const auto& [n, c] : curve) out << n << ',' << gofbt::csv::format(c) << '\n';
        files["fig1"] = {manifest.write_output("fig1.csv", out.str())};
        gofbt::svg::LineChart chart("Empirical-CDF coefficient of variation", "sample size n",
                                    "CoV");
        std::vector<double> xs, ys;
        for (const auto& [n, c] : curve) {
            xs.push_back(n);
            ys.push_back(c);
        }
        chart.add_series("cov", xs, ys);
        files["fig1"].push_back(manifest.write_output("fig1.svg", chart.render()));
        return 0;
    }
    if (figure == "fig2" || figure == "fig3") {
        const auto kind = figure == "fig2" ? gofbt::TestKind::ad : gofbt::TestKind::ad_asym;
        const auto res = sigma_sweep(kind, opt, thresholds);
        files[figure] = {manifest.write_output(figure + ".csv", res.to_csv())};
        files[figure].push_back(manifest.write_output(
            figure + ".svg",
            sigma_sweep_svg(res, std::string("Rejection rate vs sigma (") + gofbt::test_name(kind) + ")")));
        return 0;
    }
    if (figure == "fig4") {
        const std::vector<std::pair<double, double>> panels = {
            {0.0, 0.5}, {0.0, 1.5}, {0.5, 1.0}, {0.5, 1.5}};
        const char suffix[] = {'a', 'b', 'c', 'd'};
        files["fig4"] = json::array();
        for (std::size_t i = 0; i < panels.size(); ++i) {
            const auto res = panel_comparison(panels[i].first, panels[i].second, opt, thresholds);
            const std::string base = std::string("fig4") + suffix[i];
            std::ostringstream title;
            title << "Test comparison, mu=" << panels[i].first << " sigma=" << panels[i].second;
            files["fig4"].push_back(manifest.write_output(base + ".csv", res.to_csv()));
            files["fig4"].push_back(manifest.write_output(
                base + ".svg", n_sweep_svg(res, title.str(),
                                           {gofbt::TestKind::ad, gofbt::TestKind::ad_asym,
                                            gofbt::TestKind::cm, gofbt::TestKind::ks})));
        }
        return 0;
    }
    if (figure == "fig5") {
        const std::vector<double> nus = {2.8, 3.0, 3.5};
        const char suffix[] = {'a', 'b', 'c'};
        files["fig5"] = json::array();
        for (std::size_t i = 0; i < nus.size(); ++i) {
            gofbt::ScenarioGrid grid;
            grid.alternative = gofbt::ScenarioGrid::Alternative::t_student;
            grid.nu = nus[i];
            grid.sample_sizes = kSampleGrid;
            grid.trials = opt.trials;
            grid.confidence = opt.confidence;
            grid.tests = {gofbt::TestKind::ad, gofbt::TestKind::ad_asym};
            grid.seed = opt.seed;
            grid.threads = opt.threads;
            const auto res = gofbt::rejection_rate_tstudent(grid, thresholds);
            const std::string base = std::string("fig5") + suffix[i];
            std::ostringstream title;
            title << "Unit-variance t alternative, nu=" << nus[i];
            files["fig5"].push_back(manifest.write_output(base + ".csv", res.to_csv()));
            files["fig5"].push_back(manifest.write_output(
                base + ".svg", n_sweep_svg(res, title.str(),
                                           {gofbt::TestKind::ad, gofbt::TestKind::ad_asym})));
        }
        return 0;
    }
    if (figure == "fig7" || figure == "fig8") {
        gofbt::OuParams generator{-0.0004871, 0.011853, 0.018855};  // per five-day step
        gofbt::FictitiousConfig cfg;
        cfg.trials = opt.trials;
        cfg.n_scenarios = opt.scenarios;
        cfg.confidence = opt.confidence;
        cfg.seed = opt.seed;
        cfg.threads = opt.threads;
        cfg.threshold_trials = opt.threshold_trials;
        if (figure == "fig7") {
            const std::vector<std::pair<std::string, double>> horizons = {
                {"a", 1.0 / 50.0}, {"b", 1.0 / 12.0}, {"c", 1.0}, {"d", 2.0}};
            files["fig7"] = json::array();
            for (const auto& [suffix, horizon] : horizons) {
                const auto res = gofbt::fictitious_bk_experiment(generator, horizon, cfg);
                const std::string base = "fig7" + suffix;
                std::ostringstream title;
                title << "Rejection rate vs volatility underestimation, horizon " << horizon << "y";
                files["fig7"].push_back(manifest.write_output(base + ".csv", fict_bins_csv(res, 8)));
                files["fig7"].push_back(
                    manifest.write_output(base + ".svg", fict_bins_svg(res, 8, title.str())));
            }
        } else {
            const auto res = gofbt::fictitious_bk_experiment(generator, 2.0, cfg);
            std::vector<double> sorted = res.deltas;
            std::sort(sorted.begin(), sorted.end());
            const int nb = 40;
            const double lo = sorted.front(), hi = sorted.back();
            const double width = (hi - lo) / nb > 0 ? (hi - lo) / nb : 1.0;
            std::vector<double> blo(nb), bhi(nb);
            std::vector<long> counts(nb, 0);
            for (int b = 0; b < nb; ++b) {
                blo[static_cast<std::size_t>(b)] = lo + b * width;
                bhi[static_cast<std::size_t>(b)] = lo + (b + 1) * width;
            }
            for (double d : sorted)
                counts[static_cast<std::size_t>(
                    std::min<int>(nb - 1, static_cast<int>((d - lo) / width)))] += 1;
            std::ostringstream out;
            out << "# seed=" << opt.seed << " trials=" << cfg.trials << '\n';
            out << "delta_lo,delta_hi,count\n";
            for (int b = 0; b < nb; ++b)
                out << gofbt::csv::format(blo[static_cast<std::size_t>(b)]) << ','
                    << gofbt::csv::format(bhi[static_cast<std::size_t>(b)]) << ','
                    << counts[static_cast<std::size_t>(b)] << '\n';
            files["fig8"] = {manifest.write_output("fig8.csv", out.str())};
            files["fig8"].push_back(manifest.write_output(
                "fig8.svg", gofbt::svg::histogram("Volatility log-ratio distribution, horizon 2y",
                                                  "log volatility ratio", blo, bhi, counts)));
        }
        return 0;
    }
    if (figure == "table3") {
        if (opt.data.empty()) throw std::runtime_error("table3 requires --data <rate series csv>");
        manifest.add_input(opt.data);
        const auto series = gofbt::RateSeries::load_csv(opt.data, opt.dt_override);
        gofbt::BacktestConfig cfg;
        cfg.n_scenarios = opt.scenarios;
        cfg.confidence = opt.confidence;
        cfg.seed = opt.seed;
        cfg.threads = opt.threads;
        cfg.threshold_trials = opt.threshold_trials;
        const auto rows =
            gofbt::empirical_gamma_sweep(series, {1.0, 2.0, 2.5, 2.75, 3.0}, cfg);
        std::ostringstream out;
        out << "# seed=" << opt.seed << " scenarios=" << cfg.n_scenarios << '\n'
            << gofbt::gamma_sweep_to_csv(rows);
        files["table3"] = {manifest.write_output("table3.csv", out.str())};
        return 0;
    }
    throw CLI::ValidationError(
        "experiment",
        "unknown figure id '" + figure +
            "'; valid ids: fig1 fig2 fig3 fig4 fig5 fig7 fig8 table3");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"goodness-of-fit statistics and risk-factor backtesting"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON file with defaults (flags take precedence)");

    // Shared flag storage; each subcommand binds the ones it uses.
    std::string data, out_dir = ".";
    std::vector<std::string> test_names = {"ad"};
    double confidence = 0.05, gamma = 1.0, horizon = 2.0, window = 3.0, dt = 0.0;
    double threshold = 0.10;
    int n = 0, trials = 0, threads = 0, scenarios = 3000, steps = 100, paths = 10;
    int n_min = 1, n_max = 200;
    std::uint64_t seed = 42;
    bool use_table1 = false;
    double alpha = 0.0, k = 0.011853, sigma_p = 0.018855, y0 = 0.0, sim_dt = 1.0;
    std::vector<std::string> date_list;
    std::string figure;

    // Keys mirror the long flag names with dashes as underscores.
    try {
        const json cfg = load_config(prescan_config_path(argc, argv));
        auto get = [&cfg](const char* key, auto& var) {
            if (cfg.contains(key)) var = cfg.at(key).get<std::decay_t<decltype(var)>>();
        };
        get("data", data);
        get("out_dir", out_dir);
        get("tests", test_names);
        get("confidence", confidence);
        get("gamma", gamma);
        get("horizon", horizon);
        get("window", window);
        get("dt", dt);
        get("warn_threshold", threshold);
        get("n", n);
        get("trials", trials);
        get("threads", threads);
        get("scenarios", scenarios);
        get("steps", steps);
        get("paths", paths);
        get("n_min", n_min);
        get("n_max", n_max);
        get("seed", seed);
        get("alpha", alpha);
        get("k", k);
        get("sigma", sigma_p);
        get("y0", y0);
        get("sim_dt", sim_dt);
        get("dates", date_list);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    auto* stat = app.add_subcommand("stat", "test a PIT sample read from CSV");
    auto* o_data = stat->add_option("--data", data, "CSV with one probability per row");
    if (data.empty()) o_data->required();
    stat->add_option("--test", test_names, "test name (ad|ad_asym|ks|cm|all)");
    stat->add_option("--confidence", confidence, "confidence level");
    stat->add_option("--trials", trials, "Monte Carlo trials for thresholds");
    stat->add_option("--seed", seed, "random seed");
    stat->add_option("--threads", threads, "worker cap (0 = auto)");
    stat->add_flag("--table1", use_table1, "use the asymptotic AD table instead of Monte Carlo");

    auto* critvals = app.add_subcommand("critvals", "tabulate rejection thresholds");
    critvals->add_option("--test", test_names, "test name");
    critvals->add_option("--n", n, "sample size")->required();
    critvals->add_option("--trials", trials, "Monte Carlo trials");
    critvals->add_option("--seed", seed, "random seed");
    critvals->add_option("--threads", threads, "worker cap");
    critvals->add_option("--out-dir", out_dir, "output directory");

    auto* cov = app.add_subcommand("cov", "small-sample reliability curve");
    cov->add_option("--n-min", n_min, "first sample size");
    cov->add_option("--n-max", n_max, "last sample size");
    cov->add_option("--warn-threshold", threshold, "warning level");
    cov->add_option("--out-dir", out_dir, "output directory");

    auto* simulate = app.add_subcommand("simulate", "simulate mean-reverting log-cycle paths");
    simulate->add_option("--alpha", alpha, "long-run mean");
    simulate->add_option("--k", k, "reversion speed (per dt unit)");
    simulate->add_option("--sigma", sigma_p, "volatility (per sqrt dt unit)");
    simulate->add_option("--y0", y0, "initial value");
    simulate->add_option("--dt", sim_dt, "step size");
    simulate->add_option("--steps", steps, "number of steps");
    simulate->add_option("--paths", paths, "number of paths");
    simulate->add_option("--gamma", gamma, "volatility multiplier");
    simulate->add_option("--seed", seed, "random seed");
    simulate->add_option("--threads", threads, "worker cap");
    simulate->add_option("--out-dir", out_dir, "output directory");

    auto* backtest = app.add_subcommand("backtest", "rolling-origin backtest of a rate series");
    auto* bt_data = backtest->add_option("--data", data, "rate series CSV (date,rate)");
    if (data.empty()) bt_data->required();
    backtest->add_option("--test", test_names, "tests to run");
    backtest->add_option("--window", window, "calibration window in years");
    backtest->add_option("--horizon", horizon, "forecast horizon in years");
    backtest->add_option("--gamma", gamma, "volatility multiplier");
    backtest->add_option("--scenarios", scenarios, "scenarios per date");
    backtest->add_option("--confidence", confidence, "confidence level");
    backtest->add_option("--trials", trials, "Monte Carlo trials for thresholds");
    backtest->add_option("--seed", seed, "random seed");
    backtest->add_option("--threads", threads, "worker cap");
    backtest->add_option("--dt", dt, "override series step in years");
    backtest->add_option("--dates", date_list, "explicit backtest dates (ISO)");
    backtest->add_option("--out-dir", out_dir, "output directory");

    auto* experiment = app.add_subcommand("experiment", "reproduce a named study");
    experiment->add_option("figure", figure, "fig1|fig2|fig3|fig4|fig5|fig7|fig8|table3")
        ->required();
    experiment->add_option("--data", data, "rate series CSV (table3 only)");
    experiment->add_option("--trials", trials, "trials per grid point");
    experiment->add_option("--scenarios", scenarios, "scenarios per backtest date");
    experiment->add_option("--confidence", confidence, "confidence level");
    experiment->add_option("--seed", seed, "random seed");
    experiment->add_option("--threads", threads, "worker cap");
    experiment->add_option("--dt", dt, "override series step in years");
    experiment->add_option("--out-dir", out_dir, "output directory");

    for (CLI::App* sub : {stat, critvals, cov, simulate, backtest, experiment})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (stat->parsed()) {
            if (data.empty()) throw std::runtime_error("stat requires --data");
            if (trials <= 0) trials = 100000;

            const auto pits = read_pit_csv(data);
            const auto sample = gofbt::ProbSample::from(pits);
            gofbt::ThresholdProvider thresholds(seed, trials, threads, cache_dir_from_env());
            const auto report = gofbt::cov_warning(sample.n());
            for (const auto kind : parse_tests(test_names)) {
                const auto stat_value = gofbt::compute_statistic(kind, sample);
                double cut;
                std::string source;
                if (use_table1) {
                    if (kind != gofbt::TestKind::ad)
                        throw std::runtime_error("--table1 only applies to the ad test");
                    cut = gofbt::builtin_ad_table().value_at_tail(confidence);
                    source = "asymptotic table";
                } else {
                    cut = thresholds.threshold(kind, sample.n(), confidence);
                    source = "monte carlo at n=" + std::to_string(sample.n());
                }
                const auto verdict = gofbt::decide(stat_value, cut);
                std::cout << gofbt::test_name(kind) << ": statistic=" << stat_value.value
                          << " threshold=" << cut << " (" << source << ", confidence "
                          << confidence << ") verdict=" << gofbt::verdict_name(verdict) << '\n';
            }
            std::cout << "cov: n=" << report.n << " cov=" << report.cov
                      << (report.warn ? " WARNING: above " : " below ") << report.threshold;
            if (!report.caveat.empty()) std::cout << " (" << report.caveat << ")";
            std::cout << '\n';
            return 0;
        }

        if (critvals->parsed()) {
            if (trials <= 0) trials = 100000;
            RunManifest manifest("critvals", out_dir);
            manifest.config() = {{"tests", test_names}, {"n", n},       {"trials", trials},
                                 {"seed", seed},        {"threads", threads}};
            manifest.set_seed(seed);
            for (const auto kind : parse_tests(test_names)) {
                gofbt::ThresholdProvider thresholds(seed, trials, threads, cache_dir_from_env());
                const auto table = gofbt::table_from_null(thresholds.null_distribution(kind, n));
                manifest.write_output(std::string("critvals_") + gofbt::test_name(kind) + "_n" +
                                          std::to_string(n) + ".csv",
                                      gofbt::table_to_csv(table));
            }
            manifest.finalize();
            return 0;
        }

        if (cov->parsed()) {
            RunManifest manifest("cov", out_dir);
            manifest.config() = {{"n_min", n_min}, {"n_max", n_max}, {"threshold", threshold}};
            const auto curve = gofbt::cov_curve(n_min, n_max);
            std::ostringstream out;
            out << "n,cov\n";
            for (const auto& [nn, c] : curve) out << nn << ',' << gofbt::csv::format(c) << '\n';
            manifest.write_output("cov_curve.csv", out.str());
            gofbt::svg::LineChart chart("Empirical-CDF coefficient of variation", "sample size n",
                                        "CoV");
            std::vector<double> xs, ys;
            for (const auto& [nn, c] : curve) {
                xs.push_back(nn);
                ys.push_back(c);
            }
            chart.add_series("cov", xs, ys);
            manifest.write_output("cov_curve.svg", chart.render());
            manifest.finalize();
            return 0;
        }

        if (simulate->parsed()) {
            RunManifest manifest("simulate", out_dir);
            manifest.config() = {{"alpha", alpha},   {"k", k},         {"sigma", sigma_p},
                                 {"y0", y0},         {"dt", sim_dt},   {"steps", steps},
                                 {"paths", paths},   {"gamma", gamma}, {"seed", seed},
                                 {"threads", threads}};
            manifest.set_seed(seed);
            const auto params =
                gofbt::volatility_adjust(gofbt::OuParams{alpha, k, sigma_p}, gamma);
            const auto m = gofbt::simulate_ou(params, y0, sim_dt, steps, paths, seed, threads);
            std::ostringstream out;
            out << "# seed=" << seed << " alpha=" << gofbt::csv::format(params.alpha)
                << " k=" << gofbt::csv::format(params.k)
                << " sigma=" << gofbt::csv::format(params.sigma) << " dt=" << sim_dt << '\n';
            out << "path,step,y\n";
            for (int p = 0; p < m.n_paths; ++p)
                for (int s = 0; s <= m.n_steps; ++s)
                    out << p << ',' << s << ',' << gofbt::csv::format_full(m.at(p, s)) << '\n';
            manifest.write_output("ou_paths.csv", out.str());
            manifest.finalize();
            return 0;
        }

        if (backtest->parsed()) {
            if (trials <= 0) trials = 100000;
            RunManifest manifest("backtest", out_dir);
            manifest.add_input(data);
            const auto series = gofbt::RateSeries::load_csv(data, dt);
            gofbt::BacktestConfig bt;
            bt.calibration_window_years = window;
            bt.horizon_years = horizon;
            bt.n_scenarios = scenarios;
            bt.backtest_dates = date_list;
            bt.confidence = confidence;
            bt.gamma = gamma;
            bt.tests = parse_tests(test_names);
            bt.seed = seed;
            bt.threshold_trials = trials;
            bt.threads = threads;
            manifest.config() = {{"window_years", window},   {"horizon_years", horizon},
                                 {"scenarios", scenarios},   {"confidence", confidence},
                                 {"gamma", gamma},           {"seed", seed},
                                 {"tests", test_names},      {"threads", threads},
                                 {"dt_years", series.dt_years}};
            manifest.set_seed(seed);
            gofbt::ThresholdProvider thresholds(seed, trials, threads, cache_dir_from_env());
            const auto outcome = gofbt::run_backtest(series, bt, &thresholds);
            manifest.write_output("backtest_records.csv", gofbt::records_to_csv(outcome));
            manifest.write_output("hp_decomposition.csv",
                                  gofbt::hp_decomposition_to_csv(series, outcome.full_hp));

            json summary;
            summary["meta"] = manifest.config();
            for (const auto& [kind, t] : outcome.tests) {
                summary["tests"][gofbt::test_name(kind)] = {
                    {"statistic", t.statistic.value},
                    {"threshold", t.threshold},
                    {"verdict", gofbt::verdict_name(t.verdict)}};
            }
            summary["cov"] = {{"n", outcome.cov.n},
                              {"value", outcome.cov.cov},
                              {"warn", outcome.cov.warn},
                              {"threshold", outcome.cov.threshold}};
            summary["delta"] = {{"log_ratio", outcome.delta_log},
                                {"plain_ratio", outcome.delta_plain}};
            summary["warnings"] = outcome.warnings;
            manifest.write_output("backtest_summary.json", summary.dump(2) + "\n");
            manifest.finalize();
            for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
            return 0;
        }

        if (experiment->parsed()) {
            ExperimentOpts opt;
            opt.trials = trials > 0 ? trials : 10000;
            opt.scenarios = scenarios;
            opt.confidence = confidence;
            opt.seed = seed;
            opt.threads = threads;
            opt.data = data;
            opt.dt_override = dt;
            RunManifest manifest("experiment " + figure, out_dir);
            manifest.config() = {{"figure", figure},       {"trials", opt.trials},
                                 {"scenarios", scenarios}, {"confidence", confidence},
                                 {"seed", seed},           {"threads", threads}};
            manifest.set_seed(seed);
            const int rc = run_experiment(figure, opt, manifest);
            manifest.finalize();
            return rc;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

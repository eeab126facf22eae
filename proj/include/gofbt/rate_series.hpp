#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gofbt/csv.hpp"

namespace gofbt {

namespace dates {

/// Days since 1970-01-01 for a civil date (proleptic Gregorian).
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yi = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yi + (m <= 2));
}

inline std::int64_t parse_iso(const std::string& s) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &d) != 3 || m < 1 || m > 12 || d < 1 || d > 31)
        throw std::invalid_argument("invalid ISO date: " + s);
    return days_from_civil(y, m, d);
}

inline std::string format_iso(std::int64_t serial) {
    int y, m, d;
    civil_from_days(serial, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

}  // namespace dates

/// A uniformly sampled positive rate series. Rates are decimals (0.02 means
/// 2%). The time step dt is expressed in trading years: calendar spacing is
/// converted at 5 trading days per 7 calendar days and 250 trading days per
/// year, so a weekly grid gives dt = 5/250. Override dt explicitly when the
/// data uses a different convention.
struct RateSeries {
    std::vector<std::int64_t> dates;  // serial days, strictly ascending
    std::vector<double> values;
    double dt_years = 0.0;
    int trading_days_per_year = 250;

    std::size_t size() const { return values.size(); }

    void validate() const {
        if (values.size() < 2) throw std::invalid_argument("rate series needs at least 2 points");
        if (dates.size() != values.size())
            throw std::invalid_argument("rate series dates/values length mismatch");
        for (std::size_t i = 1; i < dates.size(); ++i)
            if (dates[i] <= dates[i - 1])
                throw std::invalid_argument("rate series dates must be strictly ascending");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("rate series has non-finite value");
        if (!(dt_years > 0.0)) throw std::invalid_argument("rate series dt must be positive");
    }

    static double infer_dt(const std::vector<std::int64_t>& ds, int trading_days_per_year) {
        std::vector<std::int64_t> gaps;
        for (std::size_t i = 1; i < ds.size(); ++i) gaps.push_back(ds[i] - ds[i - 1]);
        std::sort(gaps.begin(), gaps.end());
        const std::int64_t med = gaps[gaps.size() / 2];
        const double trading_days = std::max(1.0, std::round(static_cast<double>(med) * 5.0 / 7.0));
        return trading_days / static_cast<double>(trading_days_per_year);
    }

    static RateSeries load_csv(const std::string& path, double dt_override = 0.0,
                               int trading_days_per_year = 250) {
        const auto lines = csv::read_lines(path);
        RateSeries s;
        s.trading_days_per_year = trading_days_per_year;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const std::string line = csv::strip(lines[i]);
            if (line.empty() || line[0] == '#') continue;
            if (i == 0 && line == "date,rate") continue;
            const auto fields = csv::split(line);
            if (fields.size() != 2)
                throw std::runtime_error(path + ":" + std::to_string(i + 1) +
                                         ": expected 'date,rate'");
            try {
                s.dates.push_back(dates::parse_iso(csv::strip(fields[0])));
                s.values.push_back(std::stod(fields[1]));
            } catch (const std::exception& e) {
                throw std::runtime_error(path + ":" + std::to_string(i + 1) + ": " + e.what());
            }
        }
        if (s.values.size() < 2)
            throw std::runtime_error(path + ": rate series needs at least 2 rows");
        s.dt_years = dt_override > 0.0 ? dt_override : infer_dt(s.dates, trading_days_per_year);
        s.validate();
        return s;
    }

    std::string to_csv() const {
        std::ostringstream out;
        out << "date,rate\n";
        for (std::size_t i = 0; i < values.size(); ++i)
            out << dates::format_iso(dates[i]) << ',' << csv::format_full(values[i]) << '\n';
        return out.str();
    }
};

}  // namespace gofbt

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace gofbt::svg {

// Minimal self-contained SVG line charts and histograms. These are
// companions to the CSV outputs, which remain the authoritative numbers.

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f6fb4", "#d14a3a", "#3a9a5c", "#8a5ab4",
                                   "#c98a1e", "#4ab4b4", "#9a3a6a", "#6a6a6a"};
    return colors[i % 8];
}

struct Range {
    double lo = 0.0, hi = 1.0;
    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

}  // namespace detail

class LineChart {
  public:
    LineChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(std::string name, std::vector<double> xs, std::vector<double> ys) {
        series_.push_back({std::move(name), std::move(xs), std::move(ys)});
    }

    std::string render() const {
        const double width = 720, height = 480;
        const double ml = 70, mr = 150, mt = 40, mb = 50;
        double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
        for (const auto& s : series_) {
            for (double x : s.xs) { xlo = std::min(xlo, x); xhi = std::max(xhi, x); }
            for (double y : s.ys) { ylo = std::min(ylo, y); yhi = std::max(yhi, y); }
        }
        if (xlo > xhi) { xlo = 0; xhi = 1; }
        if (ylo > yhi) { ylo = 0; yhi = 1; }
        if (xhi == xlo) xhi = xlo + 1;
        if (yhi == ylo) yhi = ylo + 1;
        const double ypad = 0.05 * (yhi - ylo);
        ylo -= ypad; yhi += ypad;

        auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (width - ml - mr); };
        auto py = [&](double y) { return height - mb - (y - ylo) / (yhi - ylo) * (height - mt - mb); };

        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
          << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        o << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
          << title_ << "</text>\n";

        // axes with 5 ticks each
        o << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
          << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
        o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
          << height - mb << "\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 5; ++i) {
            const double xv = xlo + (xhi - xlo) * i / 5.0;
            const double yv = ylo + (yhi - ylo) * i / 5.0;
            o << "<line x1=\"" << px(xv) << "\" y1=\"" << height - mb << "\" x2=\"" << px(xv)
              << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
            o << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 18
              << "\" text-anchor=\"middle\">" << detail::num(xv) << "</text>\n";
            o << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
              << py(yv) << "\" stroke=\"black\"/>\n";
            o << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
              << "\" text-anchor=\"end\">" << detail::num(yv) << "</text>\n";
        }
        o << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
          << "\" text-anchor=\"middle\">" << x_label_ << "</text>\n";
        o << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
          << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (mt + height - mb) / 2
          << ")\">" << y_label_ << "</text>\n";

        for (std::size_t si = 0; si < series_.size(); ++si) {
            const auto& s = series_[si];
            o << "<polyline fill=\"none\" stroke=\"" << detail::palette(si)
              << "\" stroke-width=\"1.8\" points=\"";
            for (std::size_t i = 0; i < s.xs.size(); ++i)
                o << detail::num(px(s.xs[i])) << ',' << detail::num(py(s.ys[i])) << ' ';
            o << "\"/>\n";
            for (std::size_t i = 0; i < s.xs.size(); ++i)
                o << "<circle cx=\"" << detail::num(px(s.xs[i])) << "\" cy=\""
                  << detail::num(py(s.ys[i])) << "\" r=\"2.5\" fill=\"" << detail::palette(si)
                  << "\"/>\n";
            const double ly = mt + 18.0 * static_cast<double>(si);
            o << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
              << width - mr + 34 << "\" y2=\"" << ly << "\" stroke=\"" << detail::palette(si)
              << "\" stroke-width=\"2\"/>\n";
            o << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly + 4 << "\">" << s.name
              << "</text>\n";
        }
        o << "</svg>\n";
        return o.str();
    }

  private:
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

inline std::string histogram(const std::string& title, const std::string& x_label,
                             const std::vector<double>& bin_lo, const std::vector<double>& bin_hi,
                             const std::vector<long>& counts) {
    const double width = 720, height = 480, ml = 70, mr = 30, mt = 40, mb = 50;
    double xlo = bin_lo.front(), xhi = bin_hi.back();
    long cmax = 1;
    for (long c : counts) cmax = std::max(cmax, c);
    auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (width - ml - mr); };
    auto py = [&](double c) { return height - mb - c / static_cast<double>(cmax) * (height - mt - mb); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double x0 = px(bin_lo[i]), x1 = px(bin_hi[i]);
        const double y = py(static_cast<double>(counts[i]));
        o << "<rect x=\"" << detail::num(x0) << "\" y=\"" << detail::num(y) << "\" width=\""
          << detail::num(std::max(0.5, x1 - x0 - 1.0)) << "\" height=\""
          << detail::num(height - mb - y) << "\" fill=\"#1f6fb4\"/>\n";
    }
    o << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xlo + (xhi - xlo) * i / 5.0;
        o << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 18
          << "\" text-anchor=\"middle\">" << detail::num(xv) << "</text>\n";
    }
    o << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    o << "<text x=\"" << ml - 8 << "\" y=\"" << py(static_cast<double>(cmax)) + 4
      << "\" text-anchor=\"end\">" << cmax << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

}  // namespace gofbt::svg

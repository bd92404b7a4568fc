#include "fairplay/runner/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fairplay/core/story_io.hpp"

namespace fairplay::runner {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void open_svg(std::ostringstream& o, const std::string& title) {
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<title>" << escape(title) << "</title>\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
}

void axes(std::ostringstream& o, const Frame& f, const std::string& x_label, const std::string& y_label,
          bool x_ticks) {
    const double left = f.px(f.x0), right = f.px(f.x1), bottom = f.py(f.y0), top = f.py(f.y1);
    o << "<g stroke=\"#444\" fill=\"none\">\n";
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(right) << "\" y2=\""
      << num(bottom) << "\"/>\n";
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(left) << "\" y2=\"" << num(top)
      << "\"/>\n</g>\n";
    for (int k = 0; k <= 5; ++k) {
        const double v = f.y0 + (f.y1 - f.y0) * k / 5.0;
        o << "<line x1=\"" << num(left - 4) << "\" y1=\"" << num(f.py(v)) << "\" x2=\"" << num(right) << "\" y2=\""
          << num(f.py(v)) << "\" stroke=\"#ddd\"/>\n";
        o << "<text x=\"" << num(left - 8) << "\" y=\"" << num(f.py(v) + 4) << "\" text-anchor=\"end\">" << num(v)
          << "</text>\n";
    }
    if (x_ticks) {
        for (int k = 0; k <= 5; ++k) {
            const double v = f.x0 + (f.x1 - f.x0) * k / 5.0;
            o << "<text x=\"" << num(f.px(v)) << "\" y=\"" << num(bottom + 18) << "\" text-anchor=\"middle\">"
              << num(v) << "</text>\n";
        }
    }
    o << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(kHeight - 15) << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
    o << "<text transform=\"translate(18," << num((top + bottom) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(y_label) << "</text>\n";
}

std::string points(const Frame& f, const std::vector<double>& x, const std::vector<double>& y) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? " " : "") + num(f.px(x[i])) + "," + num(f.py(y[i]));
    return s;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<LineSeries>& series) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series x and y differ in length");
        for (double v : s.x) {
            x0 = std::min(x0, v);
            x1 = std::max(x1, v);
        }
    }
    if (!(x1 > x0)) {
        x0 = std::isfinite(x0) ? x0 - 0.5 : 0.0;
        x1 = x0 + 1.0;
    }
    const Frame f{x0, x1, 0.0, 1.0};
    std::ostringstream o;
    open_svg(o, title);
    axes(o, f, x_label, y_label, true);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        if (!s.band_low.empty()) {
            std::vector<double> bx(s.x), by(s.band_high);
            for (std::size_t i = s.x.size(); i-- > 0;) {
                bx.push_back(s.x[i]);
                by.push_back(s.band_low[i]);
            }
            o << "<polygon points=\"" << points(f, bx, by) << "\" fill=\"" << color
              << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
        }
        o << "<polyline points=\"" << points(f, s.x, s.y) << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
        o << "<line x1=\"" << num(kWidth - kRight + 15) << "\" y1=\"" << num(ly) << "\" x2=\""
          << num(kWidth - kRight + 40) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        o << "<text x=\"" << num(kWidth - kRight + 46) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label)
          << "</text>\n";
    }
    o << "<metadata><![CDATA[\nseries,x,y,band_low,band_high\n";
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i)
            o << csv_field(s.label) << ',' << format_double(s.x[i]) << ',' << format_double(s.y[i]) << ','
              << (s.band_low.empty() ? "" : format_double(s.band_low[i])) << ','
              << (s.band_high.empty() ? "" : format_double(s.band_high[i])) << '\n';
    o << "]]></metadata>\n</svg>\n";
    return o.str();
}

std::string box_plot_svg(const std::string& title, const std::string& y_label, const std::vector<BoxSeries>& boxes) {
    double lo = 0.0, hi = 1.0;
    for (const auto& b : boxes) {
        lo = std::min(lo, b.stats.min);
        hi = std::max(hi, b.stats.max);
    }
    const Frame f{0.0, static_cast<double>(std::max<std::size_t>(boxes.size(), 1)), lo, hi};
    std::ostringstream o;
    open_svg(o, title);
    axes(o, f, "", y_label, false);
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const auto& s = boxes[k].stats;
        const char* color = kPalette[k % std::size(kPalette)];
        const double c = f.px(static_cast<double>(k) + 0.5), half = 18;
        o << "<g stroke=\"" << color << "\" stroke-width=\"1.5\" fill=\"none\">\n";
        o << "<line x1=\"" << num(c) << "\" y1=\"" << num(f.py(s.lower_whisker)) << "\" x2=\"" << num(c) << "\" y2=\""
          << num(f.py(s.q1)) << "\"/>\n";
        o << "<line x1=\"" << num(c) << "\" y1=\"" << num(f.py(s.q3)) << "\" x2=\"" << num(c) << "\" y2=\""
          << num(f.py(s.upper_whisker)) << "\"/>\n";
        for (double w : {s.lower_whisker, s.upper_whisker})
            o << "<line x1=\"" << num(c - half / 2) << "\" y1=\"" << num(f.py(w)) << "\" x2=\"" << num(c + half / 2)
              << "\" y2=\"" << num(f.py(w)) << "\"/>\n";
        o << "<rect x=\"" << num(c - half) << "\" y=\"" << num(f.py(s.q3)) << "\" width=\"" << num(2 * half)
          << "\" height=\"" << num(f.py(s.q1) - f.py(s.q3)) << "\" fill=\"" << color << "\" fill-opacity=\"0.2\"/>\n";
        o << "<line x1=\"" << num(c - half) << "\" y1=\"" << num(f.py(s.median)) << "\" x2=\"" << num(c + half)
          << "\" y2=\"" << num(f.py(s.median)) << "\" stroke-width=\"2.5\"/>\n";
        for (double v : s.outliers)
            o << "<circle cx=\"" << num(c) << "\" cy=\"" << num(f.py(v)) << "\" r=\"3\"/>\n";
        o << "</g>\n<text x=\"" << num(c) << "\" y=\"" << num(f.py(lo) + 18) << "\" text-anchor=\"middle\">"
          << escape(boxes[k].label) << "</text>\n";
    }
    o << "<metadata><![CDATA[\nseries,min,q1,median,q3,max,mean,lower_whisker,upper_whisker,outliers\n";
    for (const auto& b : boxes) {
        const auto& s = b.stats;
        o << csv_field(b.label);
        for (double v : {s.min, s.q1, s.median, s.q3, s.max, s.mean, s.lower_whisker, s.upper_whisker})
            o << ',' << format_double(v);
        std::string out;
        for (double v : s.outliers) out += (out.empty() ? "" : " ") + format_double(v);
        o << ',' << out << '\n';
    }
    o << "]]></metadata>\n</svg>\n";
    return o.str();
}

std::vector<double> interpolate(const std::vector<double>& x, const std::vector<double>& y,
                                const std::vector<double>& grid) {
    if (x.empty() || x.size() != y.size()) throw std::invalid_argument("interpolation needs matching non-empty samples");
    std::vector<double> out;
    out.reserve(grid.size());
    for (double g : grid) {
        if (g <= x.front()) {
            out.push_back(y.front());
            continue;
        }
        if (g >= x.back()) {
            out.push_back(y.back());
            continue;
        }
        const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), g) - x.begin());
        const auto lo = hi - 1;
        const double t = (g - x[lo]) / (x[hi] - x[lo]);
        out.push_back(y[lo] + t * (y[hi] - y[lo]));
    }
    return out;
}

std::vector<double> unit_grid(std::size_t points) {
    if (points < 2) throw std::invalid_argument("a grid needs at least two points");
    std::vector<double> g(points);
    for (std::size_t k = 0; k < points; ++k) g[k] = static_cast<double>(k) / static_cast<double>(points - 1);
    return g;
}

}  // namespace fairplay::runner

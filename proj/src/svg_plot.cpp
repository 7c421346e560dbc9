#include "qwl/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qwl {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr double kLeft = 80.0, kRight = 770.0, kTop = 50.0, kBottom = 540.0;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Tick spacing of the form {1, 2, 5} * 10^n giving 4..9 intervals.
double nice_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

struct AxisRange {
    double lo = 0.0, hi = 1.0;
    double map(double v, double px_lo, double px_hi) const {
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

AxisRange fit(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = std::max(1.0, std::abs(lo)) * 0.5;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.06;
    return {lo - pad, hi + pad};
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("write_line_chart: no series");
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("write_line_chart: x/y size mismatch in '" + s.label +
                                        "'");
        if (!s.sd.empty() && s.sd.size() != s.y.size())
            throw std::invalid_argument("write_line_chart: sd size mismatch in '" + s.label +
                                        "'");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            const double band = s.sd.empty() ? 0.0 : s.sd[i];
            if (!any) {
                x_lo = x_hi = s.x[i];
                y_lo = s.y[i] - band;
                y_hi = s.y[i] + band;
                any = true;
            } else {
                x_lo = std::min(x_lo, s.x[i]);
                x_hi = std::max(x_hi, s.x[i]);
                y_lo = std::min(y_lo, s.y[i] - band);
                y_hi = std::max(y_hi, s.y[i] + band);
            }
        }
    }
    if (!any) throw std::invalid_argument("write_line_chart: no finite points");
    const AxisRange xr = fit(x_lo, x_hi);
    const AxisRange yr = fit(y_lo, y_hi);

    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_line_chart: cannot open " + path);
    file << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
         << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
         << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
         << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
            "font-family=\"sans-serif\">"
         << title << "</text>\n";

    // Frame and ticks.
    file << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << (kRight - kLeft)
         << "\" height=\"" << (kBottom - kTop)
         << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    const double xs = nice_step(xr.hi - xr.lo);
    for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-9 * xs; v += xs) {
        const double px = xr.map(v, kLeft, kRight);
        file << "<line x1=\"" << fmt(px) << "\" y1=\"" << kBottom << "\" x2=\"" << fmt(px)
             << "\" y2=\"" << (kBottom + 6) << "\" stroke=\"black\"/>\n"
             << "<text x=\"" << fmt(px) << "\" y=\"" << (kBottom + 22)
             << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << fmt(v)
             << "</text>\n";
    }
    const double ys = nice_step(yr.hi - yr.lo);
    for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-9 * ys; v += ys) {
        const double py = yr.map(v, kBottom, kTop);
        file << "<line x1=\"" << (kLeft - 6) << "\" y1=\"" << fmt(py) << "\" x2=\"" << kLeft
             << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n"
             << "<text x=\"" << (kLeft - 10) << "\" y=\"" << fmt(py + 4)
             << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">" << fmt(v)
             << "</text>\n";
    }
    file << "<text x=\"" << (kLeft + (kRight - kLeft) / 2) << "\" y=\"" << (kBottom + 45)
         << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" << x_label
         << "</text>\n"
         << "<text x=\"22\" y=\"" << (kTop + (kBottom - kTop) / 2)
         << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\" "
            "transform=\"rotate(-90 22 "
         << (kTop + (kBottom - kTop) / 2) << ")\">" << y_label << "</text>\n";

    // Series: error bars under the polyline, point markers on top.
    for (const auto& s : series) {
        if (!s.sd.empty()) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || !(s.sd[i] > 0.0))
                    continue;
                const double px = xr.map(s.x[i], kLeft, kRight);
                const double y0 = yr.map(s.y[i] - s.sd[i], kBottom, kTop);
                const double y1 = yr.map(s.y[i] + s.sd[i], kBottom, kTop);
                file << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(px)
                     << "\" y2=\"" << fmt(y1) << "\" stroke=\"" << s.color
                     << "\" stroke-width=\"1\"/>\n";
            }
        }
        file << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            file << fmt(xr.map(s.x[i], kLeft, kRight)) << ","
                 << fmt(yr.map(s.y[i], kBottom, kTop)) << " ";
        }
        file << "\"/>\n";
    }

    // Legend.
    double ly = kTop + 16;
    for (const auto& s : series) {
        file << "<line x1=\"" << (kRight - 150) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
             << (kRight - 120) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << s.color
             << "\" stroke-width=\"2\"/>\n"
             << "<text x=\"" << (kRight - 112) << "\" y=\"" << fmt(ly)
             << "\" font-size=\"13\" font-family=\"sans-serif\">" << s.label << "</text>\n";
        ly += 20;
    }
    file << "</svg>\n";
    if (!file) throw std::runtime_error("write_line_chart: write failed for " + path);
}

}  // namespace qwl

#include "deslab/plot.hpp"

#include "deslab/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace deslab {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

std::vector<double> ticks(double lo, double hi, int target = 6) {
    if (hi <= lo) hi = lo + 1;
    double raw = (hi - lo) / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    std::vector<double> out;
    for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step)
        out.push_back(v);
    return out;
}

} // namespace

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
    if (series.empty()) throw Error("usage", "no series to plot");

    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    bool any = false;
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!s.y[i]) continue;
            if (!any) {
                x_lo = x_hi = s.x[i];
                y_lo = y_hi = *s.y[i];
                any = true;
            } else {
                x_lo = std::min(x_lo, s.x[i]);
                x_hi = std::max(x_hi, s.x[i]);
                y_lo = std::min(y_lo, *s.y[i]);
                y_hi = std::max(y_hi, *s.y[i]);
            }
        }
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (y_hi == y_lo) y_hi = y_lo + 1;
    double pad = (y_hi - y_lo) * 0.05;
    y_lo -= pad;
    y_hi += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">"
        << escape(title) << "</text>\n";

    // axes
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << kTop + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kTop + ph << "\" stroke=\"black\"/>\n";
    for (double t : ticks(x_lo, x_hi)) {
        out << "<line x1=\"" << px(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(t)
            << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(t) << "\" y=\"" << kTop + ph + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(t)
            << "</text>\n";
    }
    for (double t : ticks(y_lo, y_hi)) {
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft
            << "\" y2=\"" << py(t) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(t) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(t)
            << "</text>\n";
    }
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << escape(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << kTop + ph / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 16 "
        << kTop + ph / 2 << ")\">" << escape(y_label) << "</text>\n";

    // polylines + legend
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        std::ostringstream pts;
        bool open = false;
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (!series[s].y[i]) { // gap: close the current polyline
                if (open) {
                    out << "<polyline fill=\"none\" stroke=\"" << color
                        << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
                    pts.str("");
                    open = false;
                }
                continue;
            }
            pts << px(series[s].x[i]) << ',' << py(*series[s].y[i]) << ' ';
            open = true;
        }
        if (open)
            out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";

        double ly = kTop + 14 + 16 * static_cast<double>(s);
        out << "<line x1=\"" << kLeft + pw + 10 << "\" y1=\"" << ly << "\" x2=\""
            << kLeft + pw + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kLeft + pw + 34 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape(series[s].name)
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string heatmap_svg(const std::string& title, const std::vector<double>& cells,
                        std::size_t n) {
    if (n == 0 || cells.size() != n * n) throw Error("usage", "heatmap expects an n x n matrix");
    const double cell = 44, left = 70, top = 60;
    const double w = left + cell * static_cast<double>(n) + 30;
    const double h = top + cell * static_cast<double>(n) + 50;

    double hi = *std::max_element(cells.begin(), cells.end());
    if (hi <= 0) hi = 1;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">"
        << escape(title) << "</text>\n";
    out << "<text x=\"" << left + cell * static_cast<double>(n) / 2 << "\" y=\"" << top - 16
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">predicted "
           "class</text>\n";
    out << "<text x=\"18\" y=\"" << top + cell * static_cast<double>(n) / 2
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 18 "
        << top + cell * static_cast<double>(n) / 2 << ")\">true class</text>\n";

    char buf[16];
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double v = cells[r * n + c];
            int shade = static_cast<int>(255 - 205 * (v / hi));
            double x = left + cell * static_cast<double>(c);
            double y = top + cell * static_cast<double>(r);
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
                << cell << "\" fill=\"rgb(" << shade << "," << shade << ",255)\" "
                << "stroke=\"#999\"/>\n";
            std::snprintf(buf, sizeof buf, "%.2f", v);
            out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << buf
                << "</text>\n";
        }
        out << "<text x=\"" << left - 8 << "\" y=\"" << top + cell * static_cast<double>(r) +
                cell / 2 + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">C" << r
            << "</text>\n";
        out << "<text x=\"" << left + cell * static_cast<double>(r) + cell / 2 << "\" y=\""
            << top + cell * static_cast<double>(n) + 16
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">C" << r
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace deslab

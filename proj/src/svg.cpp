#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pssv/errors.hpp"
#include "pssv/experiment.hpp"

// Self-contained SVG line plots of a sweep result: every column is drawn
// against the first one. Plots are a convenience; the CSV is the contract.

namespace pssv {

namespace {
constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginL = 70, kMarginR = 160, kMarginT = 30, kMarginB = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                         "#bcbd22", "#e377c2"};

std::string num(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}
} // namespace

void write_svg(const SweepResult& r, const std::string& path) {
    if (r.rows.empty() || r.columns.size() < 2) {
        throw NumericalError("nothing to plot");
    }
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& row : r.rows) {
        x_min = std::min(x_min, row[0]);
        x_max = std::max(x_max, row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            y_min = std::min(y_min, row[c]);
            y_max = std::max(y_max, row[c]);
        }
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    auto px = [&](double x) {
        return kMarginL + (x - x_min) / (x_max - x_min) * (kWidth - kMarginL - kMarginR);
    };
    auto py = [&](double y) {
        return kHeight - kMarginB -
               (y - y_min) / (y_max - y_min) * (kHeight - kMarginT - kMarginB);
    };

    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write SVG file '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame and ticks
    out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
        << kWidth - kMarginL - kMarginR << "\" height=\""
        << kHeight - kMarginT - kMarginB
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 5.0;
        const double yv = y_min + (y_max - y_min) * i / 5.0;
        out << "<line x1=\"" << px(xv) << "\" y1=\"" << kHeight - kMarginB
            << "\" x2=\"" << px(xv) << "\" y2=\"" << kHeight - kMarginB + 5
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px(xv) << "\" y=\"" << kHeight - kMarginB + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xv)
            << "</text>\n"
            << "<line x1=\"" << kMarginL - 5 << "\" y1=\"" << py(yv) << "\" x2=\""
            << kMarginL << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kMarginL - 8 << "\" y=\"" << py(yv) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    }
    out << "<text x=\"" << (kMarginL + kWidth - kMarginR) / 2 << "\" y=\""
        << kHeight - 12 << "\" font-size=\"13\" text-anchor=\"middle\">"
        << r.columns[0] << "</text>\n";

    // zero line when visible
    if (y_min < 0.0 && y_max > 0.0) {
        out << "<line x1=\"" << kMarginL << "\" y1=\"" << py(0.0) << "\" x2=\""
            << kWidth - kMarginR << "\" y2=\"" << py(0.0)
            << "\" stroke=\"#cccccc\" stroke-dasharray=\"4,3\"/>\n";
    }

    for (std::size_t c = 1; c < r.columns.size(); ++c) {
        const char* color = kColors[(c - 1) % std::size(kColors)];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& row : r.rows) {
            out << num(px(row[0])) << "," << num(py(row[c])) << " ";
        }
        out << "\"/>\n";
        const double ly = kMarginT + 16.0 * static_cast<double>(c);
        out << "<line x1=\"" << kWidth - kMarginR + 10 << "\" y1=\"" << ly
            << "\" x2=\"" << kWidth - kMarginR + 34 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kWidth - kMarginR + 40 << "\" y=\"" << ly + 4
            << "\" font-size=\"12\">" << r.columns[c] << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace pssv

#include "holovote/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace holovote {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 540.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fixed(double value, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

/// Smallest 1/2/5 * 10^k step that splits `span` into at most `slots` ticks.
double nice_step(double span, int slots) {
    const double raw = span / slots;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (mag * m >= raw)
            return mag * m;
    return mag * 10.0;
}

} // namespace

void write_sweep_svg(std::ostream& out, const std::vector<SweepRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("no sweep records to plot");

    std::vector<std::string> labels;
    std::map<std::string, std::vector<const SweepRecord*>> series;
    double x_min = records.front().participation, x_max = x_min;
    double y_max = 0.0;
    for (const SweepRecord& record : records) {
        auto [it, inserted] = series.try_emplace(record.topology);
        if (inserted)
            labels.push_back(record.topology);
        it->second.push_back(&record);
        x_min = std::min(x_min, record.participation);
        x_max = std::max(x_max, record.participation);
        y_max = std::max(y_max, record.mean_error);
    }
    if (x_max == x_min)
        x_max = x_min + 1e-6;
    if (y_max == 0.0)
        y_max = 1e-6;
    y_max *= 1.05;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double f) { return kMarginLeft + (f - x_min) / (x_max - x_min) * plot_w; };
    const auto sy = [&](double e) { return kMarginTop + plot_h - e / y_max * plot_h; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0)
        << "\" height=\"" << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' '
        << fixed(kHeight, 0) << "\">\n";
    out << "<rect width=\"" << fixed(kWidth, 0) << "\" height=\"" << fixed(kHeight, 0)
        << "\" fill=\"white\"/>\n";

    // axes
    out << "<g stroke=\"black\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << fixed(kMarginLeft, 1) << "\" y1=\"" << fixed(kMarginTop + plot_h, 1)
        << "\" x2=\"" << fixed(kMarginLeft + plot_w, 1) << "\" y2=\""
        << fixed(kMarginTop + plot_h, 1) << "\"/>\n";
    out << "<line x1=\"" << fixed(kMarginLeft, 1) << "\" y1=\"" << fixed(kMarginTop, 1)
        << "\" x2=\"" << fixed(kMarginLeft, 1) << "\" y2=\"" << fixed(kMarginTop + plot_h, 1)
        << "\"/>\n";
    out << "</g>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    const double x_step = nice_step(x_max - x_min, 10);
    for (double tick = std::ceil(x_min / x_step) * x_step; tick <= x_max + 1e-12;
         tick += x_step) {
        const double x = sx(tick);
        out << "<line x1=\"" << fixed(x, 1) << "\" y1=\"" << fixed(kMarginTop + plot_h, 1)
            << "\" x2=\"" << fixed(x, 1) << "\" y2=\"" << fixed(kMarginTop + plot_h + 5, 1)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fixed(x, 1) << "\" y=\"" << fixed(kMarginTop + plot_h + 20, 1)
            << "\" text-anchor=\"middle\">" << fixed(tick, 2) << "</text>\n";
    }
    const double y_step = nice_step(y_max, 8);
    for (double tick = 0.0; tick <= y_max + 1e-12; tick += y_step) {
        const double y = sy(tick);
        out << "<line x1=\"" << fixed(kMarginLeft - 5, 1) << "\" y1=\"" << fixed(y, 1)
            << "\" x2=\"" << fixed(kMarginLeft, 1) << "\" y2=\"" << fixed(y, 1)
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fixed(kMarginLeft - 8, 1) << "\" y=\"" << fixed(y + 4, 1)
            << "\" text-anchor=\"end\">" << fixed(tick, 4) << "</text>\n";
    }
    out << "<text x=\"" << fixed(kMarginLeft + plot_w / 2, 1) << "\" y=\""
        << fixed(kHeight - 15, 1)
        << "\" text-anchor=\"middle\">active participation fraction</text>\n";
    out << "<text x=\"20\" y=\"" << fixed(kMarginTop + plot_h / 2, 1)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << fixed(kMarginTop + plot_h / 2, 1) << ")\">mean decision error</text>\n";
    out << "</g>\n";

    for (std::size_t s = 0; s < labels.size(); ++s) {
        const auto& rows = series.at(labels[s]);
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const SweepRecord* row : rows)
            out << fixed(sx(row->participation), 1) << ',' << fixed(sy(row->mean_error), 1) << ' ';
        out << "\"/>\n";
    }

    // legend
    const double legend_x = kMarginLeft + plot_w - 130.0;
    double legend_y = kMarginTop + 10.0;
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (std::size_t s = 0; s < labels.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<line x1=\"" << fixed(legend_x, 1) << "\" y1=\"" << fixed(legend_y - 4, 1)
            << "\" x2=\"" << fixed(legend_x + 24, 1) << "\" y2=\"" << fixed(legend_y - 4, 1)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fixed(legend_x + 30, 1) << "\" y=\"" << fixed(legend_y, 1) << "\">"
            << labels[s] << "</text>\n";
        legend_y += 18.0;
    }
    out << "</g>\n";
    out << "</svg>\n";
}

} // namespace holovote

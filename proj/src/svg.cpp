#include "splitbeam/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "splitbeam/csv.hpp"

namespace splitbeam {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void take(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        } else {
            const double margin = 0.05 * (hi - lo);
            lo -= margin;
            hi += margin;
        }
    }
};

// round tick spacing to 1/2/5 decades
double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step;
    if (frac <= 1.5) step = 1.0;
    else if (frac <= 3.5) step = 2.0;
    else if (frac <= 7.5) step = 5.0;
    else step = 10.0;
    return step * mag;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

void LinePlot::add(std::string label, std::vector<double> x, std::vector<double> y) {
    series.push_back({std::move(label), std::move(x), std::move(y)});
}

std::string LinePlot::render(int width, int height) const {
    const double ml = 70, mr = 20, mt = 40, mb = 55;
    const double pw = width - ml - mr, ph = height - mt - mb;

    Range xr, yr;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("LinePlot: series size mismatch");
        for (size_t i = 0; i < s.x.size(); ++i) {
            const double xv = log_x ? std::log10(std::max(s.x[i], 1e-300)) : s.x[i];
            xr.take(xv);
            yr.take(s.y[i]);
        }
    }
    if (!std::isfinite(xr.lo) || !std::isfinite(yr.lo)) {
        xr = {0.0, 1.0};
        yr = {0.0, 1.0};
    }
    xr.pad();
    yr.pad();

    const auto px = [&](double v) { return ml + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto py = [&](double v) { return mt + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";

    // axes + ticks
    const double xstep = nice_step(xr.hi - xr.lo, 7);
    const double ystep = nice_step(yr.hi - yr.lo, 6);
    svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double v = std::ceil(xr.lo / xstep) * xstep; v <= xr.hi + 1e-12 * xstep; v += xstep) {
        const double x = px(v);
        svg << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\""
            << mt + ph << "\" stroke=\"#ddd\"/>\n";
        const double label = log_x ? std::pow(10.0, v) : v;
        svg << "<text x=\"" << x << "\" y=\"" << mt + ph + 16
            << "\" text-anchor=\"middle\">" << format_number(label) << "</text>\n";
    }
    for (double v = std::ceil(yr.lo / ystep) * ystep; v <= yr.hi + 1e-12 * ystep; v += ystep) {
        const double y = py(v);
        svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\""
            << y << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\">" << format_number(v) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape(x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">" << escape(y_label)
        << "</text>\n";

    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % (sizeof(kColors) / sizeof(kColors[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
        for (size_t i = 0; i < series[s].x.size(); ++i) {
            const double xv = log_x ? std::log10(std::max(series[s].x[i], 1e-300)) : series[s].x[i];
            if (!std::isfinite(xv) || !std::isfinite(series[s].y[i])) continue;
            svg << px(xv) << ',' << py(series[s].y[i]) << ' ';
        }
        svg << "\"/>\n";
        // legend entry
        const double ly = mt + 14 + 16 * static_cast<double>(s);
        svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
            << ml + pw - 125 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + pw - 120 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[s].label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace splitbeam

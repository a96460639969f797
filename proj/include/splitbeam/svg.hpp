#pragma once

#include <string>
#include <vector>

namespace splitbeam {

/// Minimal native SVG line plot: linear or log10 x axis, linear y axis,
/// automatic ticks, legend. No external plotting dependency.
struct LinePlot {
    struct Series {
        std::string label;
        std::vector<double> x;
        std::vector<double> y;
    };

    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<Series> series;

    void add(std::string label, std::vector<double> x, std::vector<double> y);
    std::string render(int width = 900, int height = 520) const;
};

} // namespace splitbeam

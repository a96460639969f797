#pragma once

#include <compare>

namespace splitbeam {

/// Uniform sampling of the transverse coordinate x.
///
/// The default construction used throughout ([-6w0, 6w0], 4096 points) keeps
/// an even point count so that no sample falls exactly on x = 0, where the
/// flipped mode changes sign.
struct Grid {
    double x_min = -6.0;
    double x_max = 6.0;
    int n_points = 4096;

    Grid() = default;
    Grid(double x_min, double x_max, int n_points);

    double spacing() const { return (x_max - x_min) / (n_points - 1); }
    double x(int k) const { return x_min + k * spacing(); }
    double extent() const { return x_max - x_min; }

    bool operator==(const Grid&) const = default;
};

} // namespace splitbeam

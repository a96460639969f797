#include "splitbeam/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splitbeam {

Grid::Grid(double x_min_, double x_max_, int n_points_)
    : x_min(x_min_), x_max(x_max_), n_points(n_points_) {
    if (!(x_min < x_max))
        throw std::invalid_argument("Grid: x_min must be below x_max");
    if (n_points < 2)
        throw std::invalid_argument("Grid: need at least two points");
    if (!(spacing() > 0.0) || !std::isfinite(spacing()))
        throw std::invalid_argument("Grid: spacing must be positive and finite");
}

namespace {

// Antiderivatives of the cubic Lagrange basis on nodes t = 0,1,2,3.
double lagrange_int(int j, double t) {
    switch (j) {
        case 0: return -((((t / 4 - 2) * t + 5.5) * t - 6) * t) / 6;
        case 1: return ((((t / 4 - 5.0 / 3.0) * t + 3) * t) * t) / 2;
        case 2: return -((((t / 4 - 4.0 / 3.0) * t + 1.5) * t) * t) / 2;
        default: return ((((t / 4 - 1) * t + 1) * t) * t) / 6;
    }
}

double lagrange_val(int j, double t) {
    switch (j) {
        case 0: return -(t - 1) * (t - 2) * (t - 3) / 6;
        case 1: return t * (t - 2) * (t - 3) / 2;
        case 2: return -t * (t - 1) * (t - 3) / 2;
        default: return t * (t - 1) * (t - 2) / 6;
    }
}

// First sample index at or beyond the barrier.
int barrier_index(const Grid& g, double barrier) {
    const double dx = g.spacing();
    int m = static_cast<int>(std::ceil((barrier - g.x_min) / dx));
    m = std::clamp(m, 0, g.n_points);
    while (m > 0 && g.x(m - 1) >= barrier) --m;
    while (m < g.n_points && g.x(m) < barrier) ++m;
    return m;
}

// Integrate the cell pieces of [a, b] lying on one side of the barrier. The
// four-sample stencils stay on that side, so integrands that are smooth per
// side but kinked at the barrier are reconstructed one-sidedly.
template <typename T>
T integrate_one_side(const Grid& g, std::span<const T> f, double a, double b, int m,
                     bool right_of_barrier) {
    const double dx = g.spacing();
    const int n = g.n_points;
    T total{};
    int k0 = static_cast<int>(std::floor((a - g.x_min) / dx));
    k0 = std::clamp(k0, 0, n - 2);
    for (int k = k0; k < n - 1; ++k) {
        if (g.x(k) >= b) break;
        const double lo = std::max(a, g.x(k));
        const double hi = std::min(b, g.x(k + 1));
        if (!(hi > lo)) continue;
        int s = k - 1;
        if (right_of_barrier)
            s = std::max(s, m);
        else
            s = std::min(s, m - 4);
        s = std::clamp(s, 0, n - 4);
        const double ta = (lo - g.x(s)) / dx;
        const double tb = (hi - g.x(s)) / dx;
        for (int j = 0; j < 4; ++j)
            total += f[static_cast<size_t>(s + j)] *
                     ((lagrange_int(j, tb) - lagrange_int(j, ta)) * dx);
    }
    return total;
}

template <typename T>
T integrate_impl(const Grid& g, std::span<const T> f, double a, double b, double barrier) {
    if (f.size() != static_cast<size_t>(g.n_points))
        throw std::invalid_argument("integrate_region: sample count does not match grid");
    a = std::max(a, g.x_min);
    b = std::min(b, g.x_max);
    if (!(b > a)) return T{};
    const int m = barrier_index(g, barrier);
    if (a < barrier && barrier < b) {
        return integrate_one_side<T>(g, f, a, barrier, m, false) +
               integrate_one_side<T>(g, f, barrier, b, m, true);
    }
    return integrate_one_side<T>(g, f, a, b, m, b <= barrier ? false : true);
}

} // namespace

double integrate_region(const Grid& grid, std::span<const double> samples,
                        double a, double b, double barrier) {
    return integrate_impl<double>(grid, samples, a, b, barrier);
}

cplx integrate_region(const Grid& grid, std::span<const cplx> samples,
                      double a, double b, double barrier) {
    return integrate_impl<cplx>(grid, samples, a, b, barrier);
}

double integrate_split(const Grid& grid, std::span<const double> samples, double barrier) {
    return integrate_region(grid, samples, grid.x_min, barrier, barrier) +
           integrate_region(grid, samples, barrier, grid.x_max, barrier);
}

cplx integrate_split(const Grid& grid, std::span<const cplx> samples, double barrier) {
    return integrate_region(grid, samples, grid.x_min, barrier, barrier) +
           integrate_region(grid, samples, barrier, grid.x_max, barrier);
}

double interpolate_at(const Grid& grid, std::span<const double> samples,
                      double x, double barrier) {
    if (samples.size() != static_cast<size_t>(grid.n_points))
        throw std::invalid_argument("interpolate_at: sample count does not match grid");
    if (x < grid.x_min || x > grid.x_max)
        throw std::domain_error("interpolate_at: point outside the grid");
    const double dx = grid.spacing();
    const int n = grid.n_points;
    const int m = barrier_index(grid, barrier);
    int k = static_cast<int>(std::floor((x - grid.x_min) / dx));
    k = std::clamp(k, 0, n - 2);
    int s = k - 1;
    if (x >= barrier)
        s = std::max(s, m);
    else
        s = std::min(s, m - 4);
    s = std::clamp(s, 0, n - 4);
    const double t = (x - grid.x(s)) / dx;
    double v = 0.0;
    for (int j = 0; j < 4; ++j)
        v += samples[static_cast<size_t>(s + j)] * lagrange_val(j, t);
    return v;
}

} // namespace splitbeam

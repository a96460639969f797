#pragma once

#include <complex>
#include <span>

#include "splitbeam/grid.hpp"

namespace splitbeam {

using cplx = std::complex<double>;

// Piecewise-cubic quadrature of a sampled function over [a, b] (clamped to the
// grid), fourth-order accurate. Interpolation stencils never cross `barrier`,
// so integrands that are smooth on each side of the barrier but kinked at it
// (products involving the flipped mode) are integrated one-sidedly and lose no
// accuracy. Regions must lie entirely on one side of the barrier; callers
// integrating across it split at the barrier first.
double integrate_region(const Grid& grid, std::span<const double> samples,
                        double a, double b, double barrier = 0.0);
cplx integrate_region(const Grid& grid, std::span<const cplx> samples,
                      double a, double b, double barrier = 0.0);

// Full-line integral as left-of-barrier plus right-of-barrier. This split form
// is the canonical inner-product rule of the library: it makes the discrete
// identity I_sum(u_i, u_1) = I_diff(u_i, u_0) hold exactly, because the two
// sides share samples up to sign.
double integrate_split(const Grid& grid, std::span<const double> samples,
                       double barrier = 0.0);
cplx integrate_split(const Grid& grid, std::span<const cplx> samples,
                     double barrier = 0.0);

/// Cubic interpolation of sampled values at a point (stencil respects `barrier`).
double interpolate_at(const Grid& grid, std::span<const double> samples,
                      double x, double barrier = 0.0);

} // namespace splitbeam

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "splitbeam/gaussian.hpp"
#include "splitbeam/modes.hpp"

namespace splitbeam {

/// Two-pixel split detector. Each pixel is sensitive on
/// [split +- dead_zone/2, split +- pixel_width]; photons in the dead zone or
/// beyond the pixels are lost, and the quantum efficiency applies uniformly.
struct DetectorGeometry {
    double split_position = 0.0;
    double pixel_width = 0.0;
    double dead_zone = 0.0;
    double quantum_efficiency = 1.0;
};

/// Integration weights derived from a geometry on a grid: one active interval
/// per side scaled by the efficiency.
struct DetectorMask {
    double left_lo = 0.0, left_hi = 0.0;    // active interval x < split
    double right_lo = 0.0, right_hi = 0.0;  // active interval x > split
    double split = 0.0;
    double efficiency = 1.0;

    std::vector<double> left_weights(const Grid& grid) const;
    std::vector<double> right_weights(const Grid& grid) const;
};

/// Throws std::domain_error when the geometry does not fit inside the grid.
DetectorMask detector_mask(const DetectorGeometry& geometry, const Grid& grid);

/// Mask covering the full grid with unit efficiency (ideal detection).
DetectorMask ideal_mask(const Grid& grid, double split = 0.0);

/// Means and shot-normalized variances of the four photocurrents.
struct MeasurementStats {
    double mean_sum = 0.0;   // photons per window
    double mean_diff = 0.0;
    double var_sum = 1.0;    // shot-noise units (coherent beam = 1)
    double var_diff = 1.0;
    double var_left = 1.0;
    double var_right = 1.0;
    double db_sum = 0.0;
    double db_diff = 0.0;
    double db_half = 0.0;

    static std::string csv_header();
    std::string csv_row() const;
};

enum class Photocurrent { sum, diff, left, right };

namespace detail {

/// Linearized fluctuation of one photocurrent: delta I = sqrt(N) f . delta q
/// plus an independent vacuum term absorbing every unmodeled transverse mode
/// and the photons removed by the mask.
struct LinearForm {
    Eigen::VectorXd coefficients;  // length 2n over (X1,Y1,...)
    double vacuum_completion = 0.0;
    double shot = 0.0;             // detected flux fraction normalizing the variance
};

/// Masked overlaps of the bright profile against every basis mode.
struct SplitCouplings {
    std::vector<cplx> left, right;  // W^L_i, W^R_i (efficiency folded in)
    double left_bb = 0.0, right_bb = 0.0;
    int bright = -1;
    double mean_phase = 0.0;

    LinearForm form(Photocurrent which) const;
};

SplitCouplings compute_couplings(const GaussianState& state, const ModeBasis& basis,
                                 const DetectorMask& mask);

double variance_of(const LinearForm& form, const Eigen::MatrixXd& cov);

} // namespace detail

/// Linearized split-detection statistics of a state whose mean field lives in
/// exactly one basis mode. The measurement is equivalent to a homodyne
/// detection of the quadratures that beat against the bright mean field, with
/// coupling strengths given by the masked half-plane overlaps.
MeasurementStats split_statistics(const GaussianState& state, const ModeBasis& basis,
                                  const DetectorGeometry& geometry);
MeasurementStats split_statistics(const GaussianState& state, const ModeBasis& basis,
                                  const DetectorMask& mask);

/// Difference-noise prediction from a source squeezing level through a chain
/// of efficiency factors.
struct NoiseBudget {
    double var_diff = 1.0;
    double db_diff = 0.0;
};

NoiseBudget noise_budget(double squeezing_db_source, std::span<const double> chain);

} // namespace splitbeam

#pragma once

#include "splitbeam/detection.hpp"
#include "splitbeam/modes.hpp"

namespace splitbeam {

/// Shot-noise-limited displacement floor d_sql = sqrt(N) / (2 I(0)), where
/// I(0) = N |u(split)|^2 is the photon density at the split.
struct SqlResult {
    double d_sql = 0.0;             // length
    double photons = 0.0;           // N per window
    double boundary_density = 0.0;  // I(0), photons per unit length per window
};

/// SQL for an arbitrary sampled profile; the density at the split is taken
/// from the samples. Throws degenerate_input when the density vanishes there.
SqlResult sql_general(double photons, const ModeProfile& profile,
                      double split_position = 0.0);

/// Closed form for a TEM00 beam: sqrt(pi/8) w0 / sqrt(N).
double sql_gaussian(double photons, double w0);

/// Masked differential signal of a displaced bright beam, exact (quadrature of
/// the displaced profile) and to first order (2 N |u(split)|^2 d).
struct DisplacementSignal {
    double mean_diff = 0.0;        // photons per window, exact
    double mean_diff_linear = 0.0; // first-order prediction
    bool linear_regime = true;     // false when they disagree by more than 5%
};

DisplacementSignal displacement_signal(const ModeProfile& bright,
                                       const DetectorGeometry& geometry,
                                       double displacement, double photons);
DisplacementSignal displacement_signal(const ModeProfile& bright,
                                       const DetectorMask& mask,
                                       double displacement, double photons);

/// Power SNR of a displacement measurement in one resolution-bandwidth window:
/// (d / d_sql)^2 / var_diff. Squeezing rescales the noise, never the signal.
struct SnrResult {
    double snr = 0.0;
    double displacement = 0.0;
    double var_diff = 1.0;
};

SnrResult snr(double displacement, double photons, const ModeProfile& bright,
              double var_diff, double split_position = 0.0);

/// EOM tilt calibration: transverse displacement per applied volt.
double eom_displacement(double voltage, double meters_per_volt = 3.0e-9);

} // namespace splitbeam

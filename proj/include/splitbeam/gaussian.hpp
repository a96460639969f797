#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "splitbeam/quadrature.hpp"

namespace splitbeam {

/// Squeezed-vacuum source parameters. theta is the angle of the squeezed
/// quadrature; r >= 0. The dB measure is the noise reduction of the squeezed
/// quadrature: squeezing_db = -10 log10(e^{-2r}).
struct SqueezerSpec {
    double r = 0.0;
    double theta = 0.0;

    static SqueezerSpec from_db(double squeezing_db, double theta = 0.0);
    double squeezing_db() const;
    double squeezed_variance() const;      // e^{-2r}
    double anti_squeezed_variance() const; // e^{+2r}
};

/// Multimode Gaussian state over n modes in shot-noise units: quadratures
/// ordered (X1, Y1, X2, Y2, ...), vacuum covariance = identity. `flux` is the
/// photon count per measurement window carried by the bright beam; it scales
/// the linearized photocurrent but not the quadrature normalization.
struct GaussianState {
    int n_modes = 0;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double flux = 0.0;
};

GaussianState vacuum(int n_modes);

/// Coherent excitation of one mode; flux = |alpha|^2 photons per window.
GaussianState set_coherent(GaussianState state, int mode, cplx amplitude);

/// Coherent excitation rescaled so the mode carries exactly `flux` photons per
/// window (amplitude sets the phase).
GaussianState set_coherent(GaussianState state, int mode, cplx amplitude, double flux);

/// Replace one mode's covariance block by a squeezed-vacuum block
/// R(theta) diag(e^{-2r}, e^{+2r}) R(theta)^T; the mean is untouched.
GaussianState set_squeezed_vacuum(GaussianState state, int mode, const SqueezerSpec& spec);

/// Symplectic-orthogonal mixing of modes i and j. Output j carries the
/// reflected part sqrt(R) of input i plus the transmitted part of input j;
/// R = 1 swaps the mode labels up to phase, R = 0 is the identity.
GaussianState apply_beamsplitter(GaussianState state, int i, int j,
                                 double reflectivity, double phase = 0.0);

/// Pure loss: block -> eta block + (1-eta) I, mean -> sqrt(eta) mean,
/// flux -> eta flux. Cross-covariances scale by sqrt(eta).
GaussianState apply_loss(GaussianState state, int mode, double efficiency);

/// Noise level of a shot-normalized variance: db = 10 log10(V).
double db_from_variance(double variance);
double variance_from_db(double db);

/// Uncertainty-principle test: smallest eigenvalue of cov + i*Omega must be
/// >= -tol. Returns that eigenvalue.
double physicality_margin(const GaussianState& state);
bool is_physical(const GaussianState& state, double tol = 1e-9);

/// Mean photon number of one mode: (|mean|^2 + tr cov_block - 2) / 4.
double mean_photons(const GaussianState& state, int mode);

/// JSON-layout debug serialization (n_modes, mean, cov row-major, flux).
std::string to_json(const GaussianState& state);
GaussianState state_from_json(const std::string& text);

} // namespace splitbeam

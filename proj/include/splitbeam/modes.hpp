#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "splitbeam/grid.hpp"
#include "splitbeam/quadrature.hpp"

namespace splitbeam {

/// One transverse mode: complex field amplitude on a grid, unit L2 norm
/// (so |u(x)|^2 is the photon density per unit transverse length).
///
/// Profiles built from a closed form remember it, which lets displacement be
/// evaluated analytically instead of by interpolation.
struct ModeProfile {
    enum class Form { sampled, gaussian, flipped_gaussian };

    Grid grid;
    std::vector<cplx> amplitude;
    Form form = Form::sampled;
    double waist = 0.0;   // closed-form parameters (gaussian / flipped_gaussian)
    double center = 0.0;  // beam center; the flip stays pinned at x = 0

    int size() const { return static_cast<int>(amplitude.size()); }
};

/// TEM00 profile u(x) = (2/(pi w0^2))^{1/4} exp(-(x-center)^2/w0^2), renormalized
/// on the grid. Throws std::domain_error if the grid truncates more than 1e-6
/// of the norm.
ModeProfile make_gaussian_mode(double w0, const Grid& grid, double center = 0.0);

/// Sign flip on x < 0 (a sample at exactly x = 0 keeps the + sign). An optional
/// transition width ramps the sign linearly over [-w/2, w/2] to model an
/// imperfect phase plate; the default is the ideal instantaneous flip.
ModeProfile make_flipped_mode(const ModeProfile& u0, double transition_width = 0.0);

/// Hermite-Gauss profile of the given order (order 0 = the Gaussian).
ModeProfile make_hermite_gauss(int order, double w0, const Grid& grid);

/// u(x - d). Closed-form profiles are re-evaluated shifted; sampled profiles
/// are moved by linear interpolation and renormalized. |d| must stay below
/// a tenth of the grid extent.
ModeProfile displace_profile(const ModeProfile& u, double d);

/// L2 norm of the profile under the canonical quadrature rule.
double profile_norm(const ModeProfile& u);

/// |u(x)|^2 by cubic interpolation of the squared samples (flip-safe).
double density_at(const ModeProfile& u, double x);

/// CSV export with columns x, re, im.
void write_profile_csv(const ModeProfile& u, std::ostream& os);

/// Half-plane interference integrals of a mode pair.
///
/// i_left  = integral over x < split of conj(u_i) u_j
/// i_right = integral over x > split
/// i_sum   = i_left + i_right          (total-measurement coupling)
/// i_diff  = i_right - i_left          (differential-measurement coupling)
///
/// The difference is oriented so that i_diff(u0, u1) = +1 for the flipped pair
/// and a displacement toward +x gives a positive differential signal.
struct HalfOverlaps {
    cplx i_left{};
    cplx i_right{};
    cplx i_sum{};
    cplx i_diff{};
};

HalfOverlaps half_overlaps(const ModeProfile& u_i, const ModeProfile& u_j,
                           double split = 0.0);

/// Full overlap <u_i|u_j> under the canonical (split) rule.
cplx overlap(const ModeProfile& u_i, const ModeProfile& u_j);

/// Ordered orthonormal set of profiles sharing one grid.
struct ModeBasis {
    std::vector<ModeProfile> modes;

    int size() const { return static_cast<int>(modes.size()); }
    const ModeProfile& operator[](int i) const { return modes[static_cast<size_t>(i)]; }
    const Grid& grid() const { return modes.front().grid; }
};

/// Modified Gram-Schmidt with a re-orthogonalization pass. Candidates whose
/// residual norm after projection falls below 1e-10 are skipped. The seed
/// must already be orthonormal (checked, std::invalid_argument otherwise).
ModeBasis gram_schmidt_extend(const std::vector<ModeProfile>& seed,
                              const std::vector<ModeProfile>& candidates);

/// Projection coefficients c_i = <u_i|u> and the norm left outside the basis.
struct Decomposition {
    std::vector<cplx> coefficients;
    double residual_norm = 0.0;  // 1 - sum |c_i|^2
};

Decomposition decompose(const ModeProfile& u, const ModeBasis& basis);

} // namespace splitbeam

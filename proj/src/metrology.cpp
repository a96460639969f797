#include "splitbeam/metrology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "splitbeam/errors.hpp"

namespace splitbeam {

SqlResult sql_general(double photons, const ModeProfile& profile, double split_position) {
    if (!(photons > 0.0))
        throw std::domain_error("sql_general: photon number must be positive");
    const double density = density_at(profile, split_position);
    const double peak = density_at(profile, profile.center);
    if (density <= 1e-12 * std::max(peak, 1e-300))
        throw degenerate_input("sql_general: no light at the split, the floor diverges");
    SqlResult r;
    r.photons = photons;
    r.boundary_density = photons * density;
    r.d_sql = std::sqrt(photons) / (2.0 * r.boundary_density);
    return r;
}

double sql_gaussian(double photons, double w0) {
    if (!(photons > 0.0) || !(w0 > 0.0))
        throw std::domain_error("sql_gaussian: photons and w0 must be positive");
    return std::sqrt(std::numbers::pi / 8.0) * w0 / std::sqrt(photons);
}

DisplacementSignal displacement_signal(const ModeProfile& bright, const DetectorMask& mask,
                                       double displacement, double photons) {
    const ModeProfile moved = displace_profile(bright, displacement);
    const auto& g = moved.grid;
    std::vector<double> density(moved.amplitude.size());
    for (size_t k = 0; k < density.size(); ++k) density[k] = std::norm(moved.amplitude[k]);

    const double right = integrate_region(g, density, mask.right_lo, mask.right_hi, 0.0);
    const double left = integrate_region(g, density, mask.left_lo, mask.left_hi, 0.0);

    DisplacementSignal s;
    s.mean_diff = photons * mask.efficiency * (right - left);
    s.mean_diff_linear =
        2.0 * photons * mask.efficiency * density_at(bright, mask.split) * displacement;
    const double scale = std::max(std::abs(s.mean_diff_linear), 1e-30 * photons);
    s.linear_regime = std::abs(s.mean_diff - s.mean_diff_linear) <= 0.05 * scale ||
                      (displacement == 0.0);
    return s;
}

DisplacementSignal displacement_signal(const ModeProfile& bright,
                                       const DetectorGeometry& geometry,
                                       double displacement, double photons) {
    return displacement_signal(bright, detector_mask(geometry, bright.grid),
                               displacement, photons);
}

SnrResult snr(double displacement, double photons, const ModeProfile& bright,
              double var_diff, double split_position) {
    if (!(photons > 0.0))
        throw std::domain_error("snr: photon number must be positive");
    if (!(var_diff > 0.0))
        throw std::domain_error("snr: variance must be positive");
    const double d_sql = sql_general(photons, bright, split_position).d_sql;
    SnrResult r;
    r.displacement = displacement;
    r.var_diff = var_diff;
    const double ratio = displacement / d_sql;
    r.snr = ratio * ratio / var_diff;
    return r;
}

double eom_displacement(double voltage, double meters_per_volt) {
    if (!std::isfinite(voltage))
        throw std::domain_error("eom_displacement: voltage must be finite");
    return meters_per_volt * voltage;
}

} // namespace splitbeam

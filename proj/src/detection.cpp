#include "splitbeam/detection.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "splitbeam/csv.hpp"
#include "splitbeam/errors.hpp"

namespace splitbeam {

std::vector<double> DetectorMask::left_weights(const Grid& grid) const {
    std::vector<double> w(static_cast<size_t>(grid.n_points), 0.0);
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        if (x >= left_lo && x <= left_hi) w[static_cast<size_t>(k)] = efficiency;
    }
    return w;
}

std::vector<double> DetectorMask::right_weights(const Grid& grid) const {
    std::vector<double> w(static_cast<size_t>(grid.n_points), 0.0);
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        if (x >= right_lo && x <= right_hi) w[static_cast<size_t>(k)] = efficiency;
    }
    return w;
}

DetectorMask detector_mask(const DetectorGeometry& geometry, const Grid& grid) {
    if (geometry.dead_zone < 0.0)
        throw std::domain_error("detector_mask: dead zone must be >= 0");
    if (!(geometry.pixel_width > geometry.dead_zone / 2.0))
        throw std::domain_error("detector_mask: pixel width must exceed half the dead zone");
    if (!(geometry.quantum_efficiency >= 0.0 && geometry.quantum_efficiency <= 1.0))
        throw std::domain_error("detector_mask: quantum efficiency must lie in [0, 1]");
    const double s = geometry.split_position;
    if (s - geometry.pixel_width < grid.x_min || s + geometry.pixel_width > grid.x_max)
        throw std::domain_error("detector_mask: geometry exceeds the grid");
    DetectorMask m;
    m.split = s;
    m.efficiency = geometry.quantum_efficiency;
    m.left_lo = s - geometry.pixel_width;
    m.left_hi = s - geometry.dead_zone / 2.0;
    m.right_lo = s + geometry.dead_zone / 2.0;
    m.right_hi = s + geometry.pixel_width;
    return m;
}

DetectorMask ideal_mask(const Grid& grid, double split) {
    DetectorMask m;
    m.split = split;
    m.efficiency = 1.0;
    m.left_lo = grid.x_min;
    m.left_hi = split;
    m.right_lo = split;
    m.right_hi = grid.x_max;
    return m;
}

std::string MeasurementStats::csv_header() {
    return "mean_sum,mean_diff,var_sum,var_diff,var_left,var_right,db_sum,db_diff,db_half";
}

std::string MeasurementStats::csv_row() const {
    std::ostringstream os;
    os << format_number(mean_sum) << ',' << format_number(mean_diff) << ','
       << format_number(var_sum) << ',' << format_number(var_diff) << ','
       << format_number(var_left) << ',' << format_number(var_right) << ','
       << format_number(db_sum) << ',' << format_number(db_diff) << ','
       << format_number(db_half);
    return os.str();
}

namespace detail {

SplitCouplings compute_couplings(const GaussianState& state, const ModeBasis& basis,
                                 const DetectorMask& mask) {
    if (state.n_modes != basis.size())
        throw std::invalid_argument("split_statistics: state and basis sizes differ");
    const Grid& grid = basis.grid();

    int bright = -1;
    for (int i = 0; i < state.n_modes; ++i) {
        const double m2 = state.mean(2 * i) * state.mean(2 * i) +
                          state.mean(2 * i + 1) * state.mean(2 * i + 1);
        if (m2 > 1e-18) {
            if (bright >= 0)
                throw unsupported_configuration(
                    "split_statistics: more than one mode carries a mean field");
            bright = i;
        }
    }
    if (bright < 0)
        throw degenerate_input("split_statistics: no bright mode in the state");
    if (!(state.flux > 0.0))
        throw degenerate_input("split_statistics: zero photon flux");

    SplitCouplings c;
    c.bright = bright;
    c.mean_phase = std::atan2(state.mean(2 * bright + 1), state.mean(2 * bright));

    const auto& ub = basis[bright];
    for (int i = 0; i < basis.size(); ++i) {
        std::vector<cplx> h(ub.amplitude.size());
        for (size_t k = 0; k < h.size(); ++k)
            h[k] = std::conj(ub.amplitude[k]) * basis[i].amplitude[k];
        // barrier 0: flipped profiles kink at x = 0 wherever the split sits
        const cplx wl = mask.efficiency *
                        integrate_region(grid, h, mask.left_lo, mask.left_hi, 0.0);
        const cplx wr = mask.efficiency *
                        integrate_region(grid, h, mask.right_lo, mask.right_hi, 0.0);
        c.left.push_back(wl);
        c.right.push_back(wr);
    }
    c.left_bb = c.left[static_cast<size_t>(bright)].real();
    c.right_bb = c.right[static_cast<size_t>(bright)].real();
    return c;
}

LinearForm SplitCouplings::form(Photocurrent which) const {
    const size_t n = left.size();
    LinearForm f;
    f.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n));
    double coupled_power = 0.0;
    const cplx dephase = std::polar(1.0, -mean_phase);
    for (size_t i = 0; i < n; ++i) {
        cplx w;
        switch (which) {
            case Photocurrent::sum: w = right[i] + left[i]; break;
            case Photocurrent::diff: w = right[i] - left[i]; break;
            case Photocurrent::left: w = left[i]; break;
            case Photocurrent::right: w = right[i]; break;
        }
        w *= dephase;
        f.coefficients(static_cast<Eigen::Index>(2 * i)) = w.real();
        f.coefficients(static_cast<Eigen::Index>(2 * i + 1)) = -w.imag();
        coupled_power += std::norm(w);
    }
    switch (which) {
        case Photocurrent::sum:
        case Photocurrent::diff: f.shot = left_bb + right_bb; break;
        case Photocurrent::left: f.shot = left_bb; break;
        case Photocurrent::right: f.shot = right_bb; break;
    }
    // Every transverse mode outside the basis is vacuum, and photons the mask
    // drops beat against vacuum too. Both complete the shot level exactly:
    // for a coherent beam the photocurrent variance must equal its mean.
    f.vacuum_completion = f.shot - coupled_power;
    if (f.vacuum_completion < -1e-9 * std::max(1.0, std::abs(f.shot)))
        throw std::domain_error(
            "detector mask physicality check failed: modeled couplings exceed the shot level");
    f.vacuum_completion = std::max(0.0, f.vacuum_completion);
    return f;
}

double variance_of(const LinearForm& form, const Eigen::MatrixXd& cov) {
    return form.coefficients.dot(cov * form.coefficients) + form.vacuum_completion;
}

} // namespace detail

MeasurementStats split_statistics(const GaussianState& state, const ModeBasis& basis,
                                  const DetectorMask& mask) {
    const auto c = detail::compute_couplings(state, basis, mask);
    const double flux = state.flux;

    MeasurementStats s;
    s.mean_sum = flux * (c.right_bb + c.left_bb);
    s.mean_diff = flux * (c.right_bb - c.left_bb);

    const auto var_for = [&](Photocurrent which) {
        const auto f = c.form(which);
        if (!(f.shot > 0.0))
            throw degenerate_input("split_statistics: a photocurrent sees no light");
        return detail::variance_of(f, state.cov) / f.shot;
    };
    s.var_sum = var_for(Photocurrent::sum);
    s.var_diff = var_for(Photocurrent::diff);
    s.var_left = var_for(Photocurrent::left);
    s.var_right = var_for(Photocurrent::right);
    s.db_sum = db_from_variance(s.var_sum);
    s.db_diff = db_from_variance(s.var_diff);
    s.db_half = db_from_variance((s.var_left + s.var_right) / 2.0);
    return s;
}

MeasurementStats split_statistics(const GaussianState& state, const ModeBasis& basis,
                                  const DetectorGeometry& geometry) {
    return split_statistics(state, basis, detector_mask(geometry, basis.grid()));
}

NoiseBudget noise_budget(double squeezing_db_source, std::span<const double> chain) {
    if (squeezing_db_source < 0.0)
        throw std::domain_error("noise_budget: source squeezing must be >= 0 dB");
    double v = variance_from_db(-squeezing_db_source);
    for (const double eta : chain) {
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::domain_error("noise_budget: chain factors must lie in [0, 1]");
        v = eta * v + (1.0 - eta);
    }
    return {v, db_from_variance(v)};
}

} // namespace splitbeam

#include "splitbeam/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "splitbeam/csv.hpp"

namespace splitbeam {

namespace {

std::vector<double> squared_magnitude(const ModeProfile& u) {
    std::vector<double> d(u.amplitude.size());
    for (size_t k = 0; k < d.size(); ++k) d[k] = std::norm(u.amplitude[k]);
    return d;
}

double norm_squared(const Grid& grid, const std::vector<cplx>& amplitude) {
    std::vector<double> d(amplitude.size());
    for (size_t k = 0; k < d.size(); ++k) d[k] = std::norm(amplitude[k]);
    return integrate_split(grid, d);
}

// Renormalize in place; a norm already within 1e-12 of unity is left alone so
// that exact involutions (flip twice, displace by zero) return bitwise-equal
// samples.
void renormalize(const Grid& grid, std::vector<cplx>& amplitude) {
    const double n2 = norm_squared(grid, amplitude);
    if (!(n2 > 0.0))
        throw std::domain_error("profile has zero norm on the grid");
    if (std::abs(n2 - 1.0) <= 1e-12) return;
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : amplitude) a *= scale;
}

double gaussian_amplitude(double x, double w0, double center) {
    const double arg = (x - center) / w0;
    return std::pow(2.0 / (std::numbers::pi * w0 * w0), 0.25) * std::exp(-arg * arg);
}

} // namespace

ModeProfile make_gaussian_mode(double w0, const Grid& grid, double center) {
    if (!(w0 > 0.0))
        throw std::domain_error("make_gaussian_mode: w0 must be positive");
    ModeProfile u;
    u.grid = grid;
    u.amplitude.resize(static_cast<size_t>(grid.n_points));
    for (int k = 0; k < grid.n_points; ++k)
        u.amplitude[static_cast<size_t>(k)] = gaussian_amplitude(grid.x(k), w0, center);
    const double n2 = norm_squared(grid, u.amplitude);
    if (std::abs(n2 - 1.0) > 1e-6)
        throw std::domain_error("make_gaussian_mode: grid truncates the beam (norm deficit above 1e-6)");
    renormalize(grid, u.amplitude);
    u.form = ModeProfile::Form::gaussian;
    u.waist = w0;
    u.center = center;
    return u;
}

ModeProfile make_flipped_mode(const ModeProfile& u0, double transition_width) {
    if (transition_width < 0.0)
        throw std::domain_error("make_flipped_mode: transition width must be >= 0");
    ModeProfile u = u0;
    const auto& g = u.grid;
    for (int k = 0; k < g.n_points; ++k) {
        const double x = g.x(k);
        double sign;
        if (transition_width > 0.0)
            sign = std::clamp(2.0 * x / transition_width, -1.0, 1.0);
        else
            sign = (x >= 0.0) ? 1.0 : -1.0;  // a sample at x = 0 keeps +
        u.amplitude[static_cast<size_t>(k)] *= sign;
    }
    renormalize(g, u.amplitude);
    if (transition_width > 0.0) {
        u.form = ModeProfile::Form::sampled;
        u.waist = 0.0;
        u.center = 0.0;
    } else if (u0.form == ModeProfile::Form::gaussian) {
        u.form = ModeProfile::Form::flipped_gaussian;
    } else if (u0.form == ModeProfile::Form::flipped_gaussian) {
        u.form = ModeProfile::Form::gaussian;  // flip is an involution
    } else {
        u.form = ModeProfile::Form::sampled;
    }
    return u;
}

ModeProfile make_hermite_gauss(int order, double w0, const Grid& grid) {
    if (order < 0)
        throw std::invalid_argument("make_hermite_gauss: order must be >= 0");
    if (order == 0) return make_gaussian_mode(w0, grid);
    if (!(w0 > 0.0))
        throw std::domain_error("make_hermite_gauss: w0 must be positive");
    double log_fact = 0.0;
    for (int j = 2; j <= order; ++j) log_fact += std::log(static_cast<double>(j));
    const double norm_const = std::pow(2.0 / (std::numbers::pi * w0 * w0), 0.25) *
                              std::exp(-0.5 * (order * std::numbers::ln2 + log_fact));
    ModeProfile u;
    u.grid = grid;
    u.amplitude.resize(static_cast<size_t>(grid.n_points));
    for (int k = 0; k < grid.n_points; ++k) {
        const double x = grid.x(k);
        const double xi = std::numbers::sqrt2 * x / w0;
        // physicists' Hermite recurrence
        double h_prev = 1.0, h = 2.0 * xi;
        for (int j = 2; j <= order; ++j) {
            const double h_next = 2.0 * xi * h - 2.0 * (j - 1) * h_prev;
            h_prev = h;
            h = h_next;
        }
        u.amplitude[static_cast<size_t>(k)] =
            norm_const * h * std::exp(-x * x / (w0 * w0));
    }
    const double n2 = norm_squared(grid, u.amplitude);
    if (std::abs(n2 - 1.0) > 1e-6)
        throw std::domain_error("make_hermite_gauss: grid truncates the mode");
    renormalize(grid, u.amplitude);
    u.form = ModeProfile::Form::sampled;
    u.waist = w0;
    return u;
}

ModeProfile displace_profile(const ModeProfile& u, double d) {
    const auto& g = u.grid;
    if (std::abs(d) >= 0.1 * g.extent())
        throw std::domain_error("displace_profile: displacement too large for the grid");
    if (d == 0.0) return u;
    ModeProfile v = u;
    v.center = u.center + d;
    switch (u.form) {
        case ModeProfile::Form::gaussian:
            for (int k = 0; k < g.n_points; ++k)
                v.amplitude[static_cast<size_t>(k)] = gaussian_amplitude(g.x(k), u.waist, v.center);
            break;
        case ModeProfile::Form::flipped_gaussian:
            // the beam moves, the phase plate stays at x = 0
            for (int k = 0; k < g.n_points; ++k) {
                const double x = g.x(k);
                const double sign = (x >= 0.0) ? 1.0 : -1.0;
                v.amplitude[static_cast<size_t>(k)] = sign * gaussian_amplitude(x, u.waist, v.center);
            }
            break;
        case ModeProfile::Form::sampled: {
            const double dx = g.spacing();
            for (int k = 0; k < g.n_points; ++k) {
                const double xs = g.x(k) - d;
                if (xs <= g.x_min) {
                    v.amplitude[static_cast<size_t>(k)] = u.amplitude.front();
                } else if (xs >= g.x_max) {
                    v.amplitude[static_cast<size_t>(k)] = u.amplitude.back();
                } else {
                    const int j = std::clamp(static_cast<int>(std::floor((xs - g.x_min) / dx)),
                                             0, g.n_points - 2);
                    const double t = (xs - g.x(j)) / dx;
                    v.amplitude[static_cast<size_t>(k)] =
                        (1.0 - t) * u.amplitude[static_cast<size_t>(j)] +
                        t * u.amplitude[static_cast<size_t>(j + 1)];
                }
            }
            break;
        }
    }
    renormalize(g, v.amplitude);
    return v;
}

double profile_norm(const ModeProfile& u) {
    return std::sqrt(std::max(0.0, norm_squared(u.grid, u.amplitude)));
}

double density_at(const ModeProfile& u, double x) {
    const auto d = squared_magnitude(u);
    return std::max(0.0, interpolate_at(u.grid, d, x));
}

void write_profile_csv(const ModeProfile& u, std::ostream& os) {
    os << "x,re,im\n";
    for (int k = 0; k < u.grid.n_points; ++k) {
        const auto& a = u.amplitude[static_cast<size_t>(k)];
        os << format_number(u.grid.x(k)) << ',' << format_number(a.real()) << ','
           << format_number(a.imag()) << '\n';
    }
}

HalfOverlaps half_overlaps(const ModeProfile& u_i, const ModeProfile& u_j, double split) {
    if (!(u_i.grid == u_j.grid))
        throw std::invalid_argument("half_overlaps: profiles live on different grids");
    const auto& g = u_i.grid;
    std::vector<cplx> h(u_i.amplitude.size());
    for (size_t k = 0; k < h.size(); ++k)
        h[k] = std::conj(u_i.amplitude[k]) * u_j.amplitude[k];
    HalfOverlaps o;
    o.i_left = integrate_region(g, h, g.x_min, split);
    o.i_right = integrate_region(g, h, split, g.x_max);
    o.i_sum = o.i_left + o.i_right;
    o.i_diff = o.i_right - o.i_left;
    return o;
}

cplx overlap(const ModeProfile& u_i, const ModeProfile& u_j) {
    return half_overlaps(u_i, u_j).i_sum;
}

ModeBasis gram_schmidt_extend(const std::vector<ModeProfile>& seed,
                              const std::vector<ModeProfile>& candidates) {
    if (seed.empty())
        throw std::invalid_argument("gram_schmidt_extend: seed must not be empty");
    const Grid& g = seed.front().grid;
    for (const auto& s : seed)
        if (!(s.grid == g))
            throw std::invalid_argument("gram_schmidt_extend: seed grids differ");
    for (size_t a = 0; a < seed.size(); ++a)
        for (size_t b = 0; b <= a; ++b) {
            const cplx ip = overlap(seed[a], seed[b]);
            const double expected = (a == b) ? 1.0 : 0.0;
            if (std::abs(ip - expected) > 1e-8)
                throw std::invalid_argument("gram_schmidt_extend: seed is not orthonormal");
        }

    ModeBasis basis;
    basis.modes = seed;
    for (const auto& cand : candidates) {
        if (!(cand.grid == g))
            throw std::invalid_argument("gram_schmidt_extend: candidate grid differs");
        ModeProfile v = cand;
        for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalization pass
            for (const auto& b : basis.modes) {
                const cplx c = overlap(b, v);
                for (size_t k = 0; k < v.amplitude.size(); ++k)
                    v.amplitude[k] -= c * b.amplitude[k];
            }
        }
        const double r = profile_norm(v);
        if (r < 1e-10) continue;  // linearly dependent on the basis so far
        for (auto& a : v.amplitude) a /= r;
        v.form = ModeProfile::Form::sampled;
        v.waist = 0.0;
        v.center = 0.0;
        basis.modes.push_back(std::move(v));
    }
    return basis;
}

Decomposition decompose(const ModeProfile& u, const ModeBasis& basis) {
    Decomposition d;
    d.coefficients.reserve(basis.modes.size());
    double captured = 0.0;
    for (const auto& b : basis.modes) {
        const cplx c = overlap(b, u);
        captured += std::norm(c);
        d.coefficients.push_back(c);
    }
    d.residual_norm = 1.0 - captured;
    return d;
}

} // namespace splitbeam

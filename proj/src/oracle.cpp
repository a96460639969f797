#include "splitbeam/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "splitbeam/errors.hpp"

namespace splitbeam {

namespace {

constexpr long long kBlock = 65536;  // sampling block; per-block seeds keep the
                                     // report independent of worker partitioning

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, long long block) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(block) + 1));
}

double rel_error_of(double empirical, double analytic) {
    return std::abs(empirical - analytic) / std::max(std::abs(analytic), 1e-12);
}

// Truncated <X^2> of a squeezed vacuum expanded over even number states
// |2k>, k < terms, with X = a + a^dag (vacuum variance 1).
double truncated_x_variance(double r, int terms) {
    if (r == 0.0) return 1.0;
    const double th = std::tanh(r);
    std::vector<double> c(static_cast<size_t>(terms));
    c[0] = std::sqrt(1.0 / std::cosh(r));
    for (int k = 0; k + 1 < terms; ++k)
        c[static_cast<size_t>(k + 1)] =
            c[static_cast<size_t>(k)] * (-th) * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
    double total = 0.0;
    for (int k = 0; k < terms; ++k) {
        const double n = 2.0 * k;
        total += c[static_cast<size_t>(k)] * c[static_cast<size_t>(k)] * (2.0 * n + 1.0);
        if (k + 1 < terms)
            total += 2.0 * c[static_cast<size_t>(k)] * c[static_cast<size_t>(k + 1)] *
                     std::sqrt((n + 1.0) * (n + 2.0));
    }
    return total;
}

} // namespace

double NormalSampler::operator()() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // Box-Muller on 53-bit uniforms; u1 stays strictly positive.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

OracleReport mc_variance(const GaussianState& state, const ModeBasis& basis,
                         const DetectorMask& mask, Photocurrent which,
                         long long n_samples, std::uint64_t seed) {
    if (n_samples < 10000)
        throw std::invalid_argument("mc_variance: need at least 1e4 samples");
    if (!is_physical(state))
        throw std::domain_error("mc_variance: covariance is not physical");

    const auto couplings = detail::compute_couplings(state, basis, mask);
    const auto form = couplings.form(which);
    if (!(form.shot > 0.0))
        throw degenerate_input("mc_variance: photocurrent sees no light");
    const double analytic = detail::variance_of(form, state.cov) / form.shot;

    Eigen::LLT<Eigen::MatrixXd> llt(state.cov);
    Eigen::MatrixXd chol;
    if (llt.info() == Eigen::Success) {
        chol = llt.matrixL();
    } else {
        const int d = 2 * state.n_modes;
        Eigen::LLT<Eigen::MatrixXd> jittered(
            state.cov + 1e-12 * Eigen::MatrixXd::Identity(d, d));
        if (jittered.info() != Eigen::Success)
            throw std::domain_error("mc_variance: covariance is not positive semidefinite");
        chol = jittered.matrixL();
    }

    const int d = 2 * state.n_modes;
    const double vac_coeff = std::sqrt(form.vacuum_completion);
    Eigen::VectorXd g(d);
    double sum = 0.0, sum_sq = 0.0;
    long long done = 0;
    for (long long block = 0; done < n_samples; ++block) {
        NormalSampler normal(block_seed(seed, block));
        const long long count = std::min(kBlock, n_samples - done);
        double bsum = 0.0, bsq = 0.0;
        for (long long s = 0; s < count; ++s) {
            for (int k = 0; k < d; ++k) g(k) = normal();
            // fluctuation part only; the deterministic mean cannot move a variance
            const double value =
                form.coefficients.dot(chol * g) + vac_coeff * normal();
            bsum += value;
            bsq += value * value;
        }
        sum += bsum;
        sum_sq += bsq;
        done += count;
    }
    const double m = static_cast<double>(n_samples);
    const double var = (sum_sq - sum * sum / m) / m;

    OracleReport report;
    report.analytic = analytic;
    report.empirical = var / form.shot;
    report.n = n_samples;
    report.rel_error = rel_error_of(report.empirical, report.analytic);
    report.seed = seed;
    return report;
}

OracleReport mc_variance(const GaussianState& state, const ModeBasis& basis,
                         const DetectorGeometry& geometry, Photocurrent which,
                         long long n_samples, std::uint64_t seed) {
    return mc_variance(state, basis, detector_mask(geometry, basis.grid()), which,
                       n_samples, seed);
}

OracleReport fock_squeezed_variance(double r, int cutoff) {
    if (cutoff < 10)
        throw std::invalid_argument("fock_squeezed_variance: cutoff must be >= 10");
    if (!(r >= 0.0 && r <= 1.5))
        throw std::domain_error("fock_squeezed_variance: r must lie in [0, 1.5]");

    const double truncated = truncated_x_variance(r, cutoff);
    const double extended = truncated_x_variance(r, cutoff + 240);
    const double truncation_error = std::abs(truncated - extended);
    if (truncation_error > 1e-6)
        throw cutoff_insufficient("fock_squeezed_variance: truncation error " +
                                  std::to_string(truncation_error) + " exceeds 1e-6");

    OracleReport report;
    report.analytic = std::exp(-2.0 * r);
    report.empirical = truncated;
    report.n = cutoff;
    report.rel_error = rel_error_of(report.empirical, report.analytic);
    report.seed = 0;
    return report;
}

SpectrumTrace spectrum_synthesis(const MeasurementStats& stats, double signal_snr,
                                 double signal_frequency, double rbw, double span,
                                 int n_average, std::uint64_t seed) {
    if (!(rbw > 0.0) || !(span > rbw))
        throw std::invalid_argument("spectrum_synthesis: need span > rbw > 0");
    if (n_average < 1)
        throw std::invalid_argument("spectrum_synthesis: n_average must be >= 1");
    if (signal_snr < 0.0)
        throw std::domain_error("spectrum_synthesis: snr must be >= 0");

    SpectrumTrace trace;
    trace.floor_db = stats.db_diff;
    trace.expected_peak_db = stats.db_diff + 10.0 * std::log10(1.0 + signal_snr);
    const int bins = static_cast<int>(std::llround(span / rbw)) + 1;
    trace.signal_bin = bins / 2;

    const double floor_power = variance_from_db(stats.db_diff);
    const double sigma = std::sqrt(floor_power / 2.0);
    NormalSampler normal(seed);
    trace.frequency_hz.reserve(static_cast<size_t>(bins));
    trace.power_db.reserve(static_cast<size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        trace.frequency_hz.push_back(signal_frequency - span / 2.0 + b * rbw);
        const double carrier =
            (b == trace.signal_bin) ? std::sqrt(floor_power * signal_snr) : 0.0;
        double acc = 0.0;
        for (int t = 0; t < n_average; ++t) {
            const double in_phase = carrier + sigma * normal();
            const double quadrature = sigma * normal();
            acc += in_phase * in_phase + quadrature * quadrature;
        }
        trace.power_db.push_back(10.0 * std::log10(acc / n_average));
    }
    return trace;
}

std::vector<double> noise_time_trace(double level_db, int n_points, int n_average,
                                     std::uint64_t seed) {
    if (n_points < 1 || n_average < 1)
        throw std::invalid_argument("noise_time_trace: counts must be >= 1");
    const double power = variance_from_db(level_db);
    const double sigma = std::sqrt(power / 2.0);
    NormalSampler normal(seed);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n_points));
    for (int p = 0; p < n_points; ++p) {
        double acc = 0.0;
        for (int t = 0; t < n_average; ++t) {
            const double a = sigma * normal();
            const double b = sigma * normal();
            acc += a * a + b * b;
        }
        out.push_back(10.0 * std::log10(acc / n_average));
    }
    return out;
}

} // namespace splitbeam

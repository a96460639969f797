#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "splitbeam/detection.hpp"

namespace splitbeam {

/// Result of an analytic-vs-independent comparison.
struct OracleReport {
    double analytic = 0.0;
    double empirical = 0.0;
    long long n = 0;  // sample count or Fock cutoff
    double rel_error = 0.0;
    std::uint64_t seed = 0;
};

/// Deterministic cross-platform normal sampler: mt19937_64 + Box-Muller.
/// (std::normal_distribution is implementation-defined, so it is not used.)
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
    double operator()();

private:
    std::mt19937_64 engine_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

/// Monte Carlo check of the linearized photocurrent variances: draws quadrature
/// vectors from N(mean, cov) via Cholesky (1e-12 jitter fallback), forms the
/// photocurrent combination with the same masked coefficients as
/// split_statistics, and compares the empirical shot-normalized variance to the
/// analytic one. Sampling is block-structured with per-block derived seeds, so
/// the report does not depend on how blocks would be distributed over workers.
OracleReport mc_variance(const GaussianState& state, const ModeBasis& basis,
                         const DetectorGeometry& geometry, Photocurrent which,
                         long long n_samples, std::uint64_t seed);
OracleReport mc_variance(const GaussianState& state, const ModeBasis& basis,
                         const DetectorMask& mask, Photocurrent which,
                         long long n_samples, std::uint64_t seed);

/// Truncated number-state check of the squeezed-quadrature variance e^{-2r}.
/// `cutoff` counts the even-photon-number terms kept (photon numbers up to
/// 2(cutoff-1)). Throws cutoff_insufficient when the truncation error estimate
/// exceeds 1e-6.
OracleReport fock_squeezed_variance(double r, int cutoff);

/// Synthesized spectrum-analyzer trace: flat noise floor with chi-squared(2 n)
/// bin statistics from averaging n traces, plus a modulation peak whose mean
/// sits 10 log10(1 + snr) above the floor.
struct SpectrumTrace {
    std::vector<double> frequency_hz;
    std::vector<double> power_db;
    double floor_db = 0.0;
    double expected_peak_db = 0.0;  // floor + 10 log10(1 + snr)
    int signal_bin = -1;
};

SpectrumTrace spectrum_synthesis(const MeasurementStats& stats, double signal_snr,
                                 double signal_frequency, double rbw, double span,
                                 int n_average, std::uint64_t seed);

/// Flat noise level vs time with the same averaging statistics (monitor-style
/// trace of one photocurrent's noise power).
std::vector<double> noise_time_trace(double level_db, int n_points, int n_average,
                                     std::uint64_t seed);

} // namespace splitbeam

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "splitbeam/detection.hpp"
#include "splitbeam/gaussian.hpp"
#include "splitbeam/modes.hpp"

namespace splitbeam {

/// Everything a run needs, loadable from a JSON scenario file. Lengths are in
/// meters, frequencies in Hz. flux_n empty means "solve" the photon number
/// from snr_coherent_target at reference_rbw.
struct ScenarioConfig {
    // beam
    double w0 = 200e-6;
    // grid
    double grid_half_width_w0 = 6.0;
    int grid_points = 4096;
    // squeezer
    double squeezing_db = 3.5;
    double relative_phase = 0.0;
    // chain
    double beamsplitter_reflectivity = 0.92;
    double quantum_efficiency = 0.90;
    std::optional<double> chain_efficiency = 0.79;  // fitted total; disables mask losses
    double mode_match_visibility = 1.0;
    // detector
    double split_position = 0.0;
    double dead_zone = 25e-6;
    double pixel_width = 500e-6;
    // signal
    std::optional<double> flux_n;  // photons per window; empty = solve
    double snr_coherent_target = 0.68;
    double displacement_amplitude = 2.9e-10;
    double signal_frequency = 4.5e6;
    double eom_nm_per_volt = 3.0;
    // analyzer
    double rbw = 100e3;
    double reference_rbw = 100e3;
    double span = 1.0e6;
    int n_average = 10;
    // misc
    std::uint64_t seed = 20030515;
    bool inject_broken_mask = false;  // validation fault injection

    /// Parse a scenario file; config_error carries a line number on bad input.
    static ScenarioConfig load(const std::string& path);
    static ScenarioConfig parse(const std::string& text, const std::string& origin);

    /// Apply one `--set dotted.key=value` override.
    void apply_override(const std::string& assignment);

    /// Range checks; throws config_error.
    void validate() const;

    std::string to_json() const;
};

/// Assembled two-mode scenario: mode 0 = TEM00 (squeezed vacuum),
/// mode 1 = flipped (bright coherent).
struct Scenario {
    Grid grid;
    ModeBasis basis;
    GaussianState state;
    DetectorGeometry geometry;  // what split_statistics should see
    int squeezed_mode = 0;
    int bright_mode = 1;
    double chain_efficiency_used = 1.0;  // total loss applied to the squeezed mode
};

/// Build the optical scenario. With a fitted chain efficiency the squeezed
/// mode sees that single loss and the detector masks are ideal (the fitted
/// value already contains QE and dead-zone losses); otherwise the beamsplitter
/// acts as a state loss and QE + dead zone live in the masks. `coherent_only`
/// replaces the squeezed vacuum by vacuum (SQL baseline).
Scenario build_scenario(const ScenarioConfig& config, bool coherent_only = false);

/// Photons per window for the configured displacement and rbw; either the
/// configured number or the back-solved one. Throws unsolvable_error.
double resolve_flux(const ScenarioConfig& config, const Scenario& scenario);

} // namespace splitbeam

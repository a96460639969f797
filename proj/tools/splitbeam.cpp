// splitbeam - split-detector displacement metrology with multimode squeezed light
//
// Subcommands reproduce the reference experiment at desk scale:
//   noise     sum/difference/per-half noise levels and the comparison table
//   sql       shot-noise displacement floor over an (N, w0) sweep
//   spectrum  synthesized displacement spectra with and without squeezing
//   validate  oracle comparisons and invariant suites
//
// Exit codes: 0 ok, 1 validation failure, 2 config error, 3 unsolvable
// operating point.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "splitbeam/commands.hpp"
#include "splitbeam/errors.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
};

void attach(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "scenario file (JSON key/value)");
    cmd->add_option("--set", opt.overrides, "override a config entry, dotted.key=value")
        ->take_all();
    cmd->add_option("--out", opt.out_dir, "output directory for CSV/SVG files");
    cmd->add_option("--seed", opt.seed, "override the scenario seed");
}

splitbeam::ScenarioConfig load_config(const CommonOptions& opt) {
    splitbeam::ScenarioConfig config = opt.config_path.empty()
                                           ? splitbeam::ScenarioConfig{}
                                           : splitbeam::ScenarioConfig::load(opt.config_path);
    for (const auto& assignment : opt.overrides) config.apply_override(assignment);
    if (opt.seed) config.seed = *opt.seed;
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"split-detector displacement metrology with multimode squeezed light"};
    app.require_subcommand(1);

    CommonOptions noise_opt, sql_opt, spectrum_opt, validate_opt;
    attach(app.add_subcommand("noise", "noise levels of the split detection"), noise_opt);
    attach(app.add_subcommand("sql", "standard-quantum-limit table"), sql_opt);
    attach(app.add_subcommand("spectrum", "displacement spectrum and SNR"), spectrum_opt);
    attach(app.add_subcommand("validate", "oracle and invariant suite"), validate_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("noise"))
            return splitbeam::run_noise(load_config(noise_opt), noise_opt.out_dir, std::cout);
        if (app.got_subcommand("sql"))
            return splitbeam::run_sql(load_config(sql_opt), sql_opt.out_dir, std::cout);
        if (app.got_subcommand("spectrum"))
            return splitbeam::run_spectrum(load_config(spectrum_opt), spectrum_opt.out_dir,
                                           std::cout);
        if (app.got_subcommand("validate"))
            return splitbeam::run_validate(load_config(validate_opt), validate_opt.out_dir,
                                           std::cout);
    } catch (const splitbeam::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const splitbeam::unsolvable_error& e) {
        std::cerr << "unsolvable operating point: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

#include "splitbeam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "splitbeam/errors.hpp"
#include "splitbeam/metrology.hpp"

namespace splitbeam {

namespace {

using nlohmann::json;

int line_of_byte(const std::string& text, size_t byte) {
    int line = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

double require_number(const json& j, const std::string& key) {
    if (!j.is_number())
        throw config_error("config key '" + key + "' must be a number");
    return j.get<double>();
}

[[noreturn]] void unknown_key(const std::string& group, const std::string& key) {
    throw config_error("unknown config key '" + (group.empty() ? key : group + "." + key) + "'");
}

} // namespace

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse(buf.str(), path);
}

ScenarioConfig ScenarioConfig::parse(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(origin + ":" + std::to_string(line_of_byte(text, e.byte)) +
                           ": " + e.what());
    }
    if (!root.is_object())
        throw config_error(origin + ": config root must be an object");

    ScenarioConfig c;
    for (const auto& [group, value] : root.items()) {
        if (group == "seed") {
            if (!value.is_number_unsigned() && !value.is_number_integer())
                throw config_error("config key 'seed' must be an integer");
            c.seed = value.get<std::uint64_t>();
            continue;
        }
        if (!value.is_object())
            throw config_error("config key '" + group + "' must be an object");
        for (const auto& [key, v] : value.items()) {
            if (group == "beam") {
                if (key == "w0") c.w0 = require_number(v, key);
                else unknown_key(group, key);
            } else if (group == "grid") {
                if (key == "half_width_w0") c.grid_half_width_w0 = require_number(v, key);
                else if (key == "n_points") c.grid_points = v.get<int>();
                else unknown_key(group, key);
            } else if (group == "squeezer") {
                if (key == "squeezing_db") c.squeezing_db = require_number(v, key);
                else if (key == "relative_phase") c.relative_phase = require_number(v, key);
                else unknown_key(group, key);
            } else if (group == "chain") {
                if (key == "beamsplitter_R") c.beamsplitter_reflectivity = require_number(v, key);
                else if (key == "quantum_efficiency") c.quantum_efficiency = require_number(v, key);
                else if (key == "chain_efficiency") {
                    if (v.is_null()) c.chain_efficiency.reset();
                    else c.chain_efficiency = require_number(v, key);
                } else if (key == "mode_match_visibility") c.mode_match_visibility = require_number(v, key);
                else unknown_key(group, key);
            } else if (group == "detector") {
                if (key == "split_position") c.split_position = require_number(v, key);
                else if (key == "dead_zone") c.dead_zone = require_number(v, key);
                else if (key == "pixel_width") c.pixel_width = require_number(v, key);
                else unknown_key(group, key);
            } else if (group == "signal") {
                if (key == "flux_N") {
                    if (v.is_string()) {
                        if (v.get<std::string>() != "solve")
                            throw config_error("signal.flux_N must be a number or \"solve\"");
                        c.flux_n.reset();
                    } else {
                        c.flux_n = require_number(v, key);
                    }
                } else if (key == "snr_coherent_target") c.snr_coherent_target = require_number(v, key);
                else if (key == "displacement_amplitude") c.displacement_amplitude = require_number(v, key);
                else if (key == "signal_frequency") c.signal_frequency = require_number(v, key);
                else if (key == "eom_nm_per_volt") c.eom_nm_per_volt = require_number(v, key);
                else unknown_key(group, key);
            } else if (group == "analyzer") {
                if (key == "rbw") c.rbw = require_number(v, key);
                else if (key == "reference_rbw") c.reference_rbw = require_number(v, key);
                else if (key == "span") c.span = require_number(v, key);
                else if (key == "n_average") c.n_average = v.get<int>();
                else unknown_key(group, key);
            } else if (group == "validate") {
                if (key == "inject_broken_mask") {
                    if (!v.is_boolean())
                        throw config_error("validate.inject_broken_mask must be a boolean");
                    c.inject_broken_mask = v.get<bool>();
                } else unknown_key(group, key);
            } else {
                unknown_key("", group);
            }
        }
    }
    c.validate();
    return c;
}

void ScenarioConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw config_error("--set expects dotted.key=value, got '" + assignment + "'");
    std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // unquoted strings like `solve`
    }
    std::replace(path.begin(), path.end(), '.', '/');
    json root = json::parse(to_json());
    try {
        root[json::json_pointer("/" + path)] = value;
    } catch (const json::exception& e) {
        throw config_error("--set " + assignment + ": " + e.what());
    }
    *this = parse(root.dump(), "--set " + assignment);
}

void ScenarioConfig::validate() const {
    const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!(w0 > 0.0)) throw config_error("beam.w0 must be positive");
    if (!(grid_half_width_w0 > 0.0)) throw config_error("grid.half_width_w0 must be positive");
    if (grid_points < 16) throw config_error("grid.n_points must be at least 16");
    if (squeezing_db < 0.0) throw config_error("squeezer.squeezing_db must be >= 0");
    if (!in_unit(beamsplitter_reflectivity)) throw config_error("chain.beamsplitter_R must lie in [0, 1]");
    if (!in_unit(quantum_efficiency)) throw config_error("chain.quantum_efficiency must lie in [0, 1]");
    if (chain_efficiency && !in_unit(*chain_efficiency))
        throw config_error("chain.chain_efficiency must lie in [0, 1]");
    if (!in_unit(mode_match_visibility)) throw config_error("chain.mode_match_visibility must lie in [0, 1]");
    if (dead_zone < 0.0) throw config_error("detector.dead_zone must be >= 0");
    if (!(pixel_width > dead_zone / 2.0))
        throw config_error("detector.pixel_width must exceed half the dead zone");
    if (flux_n && !(*flux_n > 0.0)) throw config_error("signal.flux_N must be positive");
    if (!(snr_coherent_target > 0.0)) throw config_error("signal.snr_coherent_target must be positive");
    if (displacement_amplitude < 0.0) throw config_error("signal.displacement_amplitude must be >= 0");
    if (!(signal_frequency > 0.0)) throw config_error("signal.signal_frequency must be positive");
    if (!(eom_nm_per_volt > 0.0)) throw config_error("signal.eom_nm_per_volt must be positive");
    if (!(rbw > 0.0)) throw config_error("analyzer.rbw must be positive");
    if (!(reference_rbw > 0.0)) throw config_error("analyzer.reference_rbw must be positive");
    if (!(span > rbw)) throw config_error("analyzer.span must exceed the rbw");
    if (n_average < 1) throw config_error("analyzer.n_average must be >= 1");
}

std::string ScenarioConfig::to_json() const {
    json j;
    j["beam"]["w0"] = w0;
    j["grid"]["half_width_w0"] = grid_half_width_w0;
    j["grid"]["n_points"] = grid_points;
    j["squeezer"]["squeezing_db"] = squeezing_db;
    j["squeezer"]["relative_phase"] = relative_phase;
    j["chain"]["beamsplitter_R"] = beamsplitter_reflectivity;
    j["chain"]["quantum_efficiency"] = quantum_efficiency;
    if (chain_efficiency) j["chain"]["chain_efficiency"] = *chain_efficiency;
    else j["chain"]["chain_efficiency"] = nullptr;
    j["chain"]["mode_match_visibility"] = mode_match_visibility;
    j["detector"]["split_position"] = split_position;
    j["detector"]["dead_zone"] = dead_zone;
    j["detector"]["pixel_width"] = pixel_width;
    if (flux_n) j["signal"]["flux_N"] = *flux_n;
    else j["signal"]["flux_N"] = "solve";
    j["signal"]["snr_coherent_target"] = snr_coherent_target;
    j["signal"]["displacement_amplitude"] = displacement_amplitude;
    j["signal"]["signal_frequency"] = signal_frequency;
    j["signal"]["eom_nm_per_volt"] = eom_nm_per_volt;
    j["analyzer"]["rbw"] = rbw;
    j["analyzer"]["reference_rbw"] = reference_rbw;
    j["analyzer"]["span"] = span;
    j["analyzer"]["n_average"] = n_average;
    j["seed"] = seed;
    j["validate"]["inject_broken_mask"] = inject_broken_mask;
    return j.dump(2);
}

Scenario build_scenario(const ScenarioConfig& config, bool coherent_only) {
    Scenario sc;
    const double half = config.grid_half_width_w0 * config.w0;
    sc.grid = Grid(-half, half, config.grid_points);

    const ModeProfile u0 = make_gaussian_mode(config.w0, sc.grid);
    const ModeProfile u1 = make_flipped_mode(u0);
    sc.basis.modes = {u0, u1};

    GaussianState state = vacuum(2);
    if (!coherent_only && config.squeezing_db > 0.0)
        state = set_squeezed_vacuum(state, sc.squeezed_mode,
                                    SqueezerSpec::from_db(config.squeezing_db,
                                                          config.relative_phase));

    // Fitted mode: one effective loss stands in for the whole detection chain
    // and the masks stay ideal. Hardware mode: the beamsplitter acts on the
    // state, QE and dead zone live in the masks.
    double chain = config.chain_efficiency ? *config.chain_efficiency
                                           : config.beamsplitter_reflectivity;
    const double visibility_sq = config.mode_match_visibility * config.mode_match_visibility;
    chain *= visibility_sq;
    state = apply_loss(state, sc.squeezed_mode, chain);
    sc.chain_efficiency_used = chain;

    state = set_coherent(state, sc.bright_mode, cplx(1.0, 0.0), 1.0);
    sc.state = std::move(state);

    if (config.chain_efficiency) {
        sc.geometry.split_position = config.split_position;
        sc.geometry.pixel_width = std::min(half - std::abs(config.split_position), half);
        sc.geometry.dead_zone = 0.0;
        sc.geometry.quantum_efficiency = 1.0;
    } else {
        sc.geometry.split_position = config.split_position;
        sc.geometry.pixel_width = config.pixel_width;
        sc.geometry.dead_zone = config.dead_zone;
        sc.geometry.quantum_efficiency = config.quantum_efficiency;
    }
    return sc;
}

double resolve_flux(const ScenarioConfig& config, const Scenario& scenario) {
    if (config.flux_n) return *config.flux_n;
    const double d = config.displacement_amplitude;
    if (!(d > 0.0))
        throw unsolvable_error("flux solve needs a nonzero displacement amplitude");
    const ModeProfile& bright = scenario.basis[scenario.bright_mode];
    const double density = density_at(bright, config.split_position);
    if (!(density > 0.0))
        throw unsolvable_error("flux solve needs light at the split");
    // snr_coherent = (d / d_sql)^2 = 4 N d^2 |u(split)|^4 at the reference rbw,
    // then N scales with the window length 1/rbw.
    const double n_ref = config.snr_coherent_target / (4.0 * d * d * density * density);
    return n_ref * config.reference_rbw / config.rbw;
}

} // namespace splitbeam

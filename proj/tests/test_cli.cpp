// End-to-end runs of the splitbeam CLI: scenario loading, overrides, output
// files, and the documented exit codes (0 ok, 1 validation failure, 2 config
// error, 3 unsolvable operating point).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cli_util.hpp"

namespace {

const std::string kBin = SPLITBEAM_BIN;
const std::string kScenario = PAPER_SCENARIO;

std::string base(const std::string& args, const std::string& out) {
    return kBin + " " + args + " --config " + kScenario + " --out " + out;
}

} // namespace

TEST_CASE("noise: reference scenario reproduces the published levels") {
    const auto out = cli_util::fresh_dir("cli_noise");
    const auto run = cli_util::run(base("noise", out));
    REQUIRE(run.exit_code == 0);
    const auto rows = cli_util::read_tagged(out + "/noise_comparison.csv");
    CHECK(rows.at("db_diff").first == doctest::Approx(-2.50).epsilon(0.02));
    CHECK(rows.at("db_half").first == doctest::Approx(-1.07).epsilon(0.05));
    CHECK(std::abs(rows.at("db_sum").first) < 0.01);
    CHECK(rows.at("db_diff").second == "predicted");
    CHECK(rows.at("db_diff_reference").second == "paper-measured");
    CHECK(rows.at("chain_efficiency").second == "fitted");
    CHECK(cli_util::read_file(out + "/noise_levels.csv").rfind("mean_sum,", 0) == 0);
    CHECK(cli_util::read_file(out + "/noise_traces.svg").find("<svg") != std::string::npos);
}

TEST_CASE("noise: without squeezing every level sits at shot noise") {
    const auto out = cli_util::fresh_dir("cli_noise0");
    const auto run = cli_util::run(base("noise --set squeezer.squeezing_db=0", out));
    REQUIRE(run.exit_code == 0);
    const auto rows = cli_util::read_tagged(out + "/noise_comparison.csv");
    CHECK(std::abs(rows.at("db_diff").first) < 1e-9);
    CHECK(std::abs(rows.at("db_half").first) < 1e-9);
    CHECK(std::abs(rows.at("db_sum").first) < 1e-9);
}

TEST_CASE("noise: quarter-wave relative phase exposes the anti-squeezed quadrature") {
    const auto out = cli_util::fresh_dir("cli_anti");
    const auto run =
        cli_util::run(base("noise --set squeezer.relative_phase=1.5707963267948966", out));
    REQUIRE(run.exit_code == 0);
    const auto rows = cli_util::read_tagged(out + "/noise_comparison.csv");
    CHECK(rows.at("db_diff").first == doctest::Approx(2.9635574381).epsilon(1e-6));
}

TEST_CASE("noise: hardware mode composes the same budget as the mask route") {
    const auto out = cli_util::fresh_dir("cli_hw");
    const auto run = cli_util::run(base("noise --set chain.chain_efficiency=null", out));
    REQUIRE(run.exit_code == 0);
    const auto rows = cli_util::read_tagged(out + "/noise_comparison.csv");
    CHECK(rows.at("db_diff").first ==
          doctest::Approx(rows.at("db_diff_hardware_budget").first).epsilon(1e-9));
    CHECK(rows.at("db_diff").first == doctest::Approx(-2.31).epsilon(0.01));
}

TEST_CASE("sql: table rows agree with the closed form and scale linearly in w0") {
    const auto out = cli_util::fresh_dir("cli_sql");
    const auto run = cli_util::run(base("sql", out));
    REQUIRE(run.exit_code == 0);
    std::istringstream table(cli_util::read_file(out + "/sql_table.csv"));
    std::string line;
    std::getline(table, line);
    CHECK(line == "photons,w0_m,d_sql_analytic_m,d_sql_numeric_m,rel_error");
    int rows = 0;
    std::map<std::pair<double, double>, double> sql;  // (N, w0) -> numeric
    while (std::getline(table, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string n, w0, analytic, numeric, rel;
        std::getline(fields, n, ',');
        std::getline(fields, w0, ',');
        std::getline(fields, analytic, ',');
        std::getline(fields, numeric, ',');
        std::getline(fields, rel, ',');
        CHECK(std::stod(rel) < 1e-6);
        sql[{std::stod(n), std::stod(w0)}] = std::stod(numeric);
    }
    CHECK(rows == 25);
    for (const double n : {1e3, 1e9, 1e15})
        CHECK(sql.at({n, 1e-3}) == doctest::Approx(2.0 * sql.at({n, 5e-4})).epsilon(1e-9));
}

TEST_CASE("spectrum: solved operating point reproduces the published SNR pair") {
    const auto out = cli_util::fresh_dir("cli_spec");
    const auto run = cli_util::run(base("spectrum", out));
    REQUIRE(run.exit_code == 0);
    const auto rows = cli_util::read_tagged(out + "/spectrum_summary.csv");
    CHECK(rows.at("snr_coherent").first == doctest::Approx(0.68).epsilon(1e-9));
    CHECK(rows.at("snr_squeezed").first == doctest::Approx(1.208).epsilon(0.005));
    CHECK(rows.at("improvement_factor").first == doctest::Approx(1.7766).epsilon(0.005));
    CHECK(rows.at("flux_N").second == "fitted");
    CHECK(rows.at("flux_N").first > 1e10);
    CHECK(cli_util::read_file(out + "/spectrum_coherent.csv").rfind("frequency_hz,power_db", 0) ==
          0);
    CHECK(cli_util::read_file(out + "/spectrum.svg").find("squeezed floor") != std::string::npos);
}

TEST_CASE("spectrum: improvement factor is invariant under the resolution bandwidth") {
    const auto out100 = cli_util::fresh_dir("cli_spec_rbw100");
    const auto out10 = cli_util::fresh_dir("cli_spec_rbw10");
    REQUIRE(cli_util::run(base("spectrum", out100)).exit_code == 0);
    REQUIRE(cli_util::run(base("spectrum --set analyzer.rbw=10e3", out10)).exit_code == 0);
    const auto a = cli_util::read_tagged(out100 + "/spectrum_summary.csv");
    const auto b = cli_util::read_tagged(out10 + "/spectrum_summary.csv");
    CHECK(a.at("improvement_factor").first ==
          doctest::Approx(b.at("improvement_factor").first).epsilon(1e-12));
    // the longer window collects tenfold the photons, so both SNRs scale up
    CHECK(b.at("snr_coherent").first == doctest::Approx(6.8).epsilon(1e-9));
}

TEST_CASE("spectrum: zero displacement with explicit flux reports zero SNR") {
    const auto out = cli_util::fresh_dir("cli_spec_zero");
    const auto run = cli_util::run(
        base("spectrum --set signal.displacement_amplitude=0 --set signal.flux_N=1e11", out));
    REQUIRE(run.exit_code == 0);
    const auto rows = cli_util::read_tagged(out + "/spectrum_summary.csv");
    CHECK(rows.at("snr_coherent").first == 0.0);
    CHECK(rows.at("snr_squeezed").first == 0.0);
}

TEST_CASE("spectrum: unsolvable operating point exits with code 3") {
    const auto out = cli_util::fresh_dir("cli_spec_unsolv");
    const auto run =
        cli_util::run(base("spectrum --set signal.displacement_amplitude=0", out));
    CHECK(run.exit_code == 3);
    CHECK(run.output.find("unsolvable") != std::string::npos);
}

TEST_CASE("validate: passes on the reference scenario for several seeds") {
    for (const std::string seed : {"1", "2"}) {
        const auto out = cli_util::fresh_dir("cli_val_seed" + seed);
        const auto run = cli_util::run(base("validate --seed " + seed, out));
        CHECK(run.exit_code == 0);
        CHECK(run.output.find("FAIL") == std::string::npos);
    }
}

TEST_CASE("validate: injected broken mask fails naming the physicality check") {
    const auto out = cli_util::fresh_dir("cli_val_inject");
    const auto run =
        cli_util::run(base("validate --set validate.inject_broken_mask=true", out));
    CHECK(run.exit_code == 1);
    CHECK(run.output.find("FAIL mask_physicality") != std::string::npos);
}

TEST_CASE("config errors exit with code 2 and a line-numbered message") {
    const auto out = cli_util::fresh_dir("cli_badcfg");
    const auto bad_path = out + "/broken.scenario";
    std::ofstream(bad_path) << "{\n  \"beam\": { \"w0\": oops }\n}\n";
    const auto run = cli_util::run(kBin + " noise --config " + bad_path + " --out " + out);
    CHECK(run.exit_code == 2);
    CHECK(run.output.find(":2:") != std::string::npos);

    const auto unknown =
        cli_util::run(base("noise --set detector.pixel_wdith=1e-3", out));
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.output.find("pixel_wdith") != std::string::npos);

    const auto invalid = cli_util::run(base("noise --set chain.quantum_efficiency=1.4", out));
    CHECK(invalid.exit_code == 2);
}

TEST_CASE("csv outputs are byte-identical across reruns with one seed") {
    const auto out_a = cli_util::fresh_dir("cli_det_a");
    const auto out_b = cli_util::fresh_dir("cli_det_b");
    REQUIRE(cli_util::run(base("spectrum --seed 77", out_a)).exit_code == 0);
    REQUIRE(cli_util::run(base("spectrum --seed 77", out_b)).exit_code == 0);
    for (const std::string name :
         {"spectrum_coherent.csv", "spectrum_squeezed.csv", "spectrum_summary.csv"})
        CHECK(cli_util::read_file(out_a + "/" + name) ==
              cli_util::read_file(out_b + "/" + name));
}

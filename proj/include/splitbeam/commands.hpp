#pragma once

#include <iosfwd>
#include <string>

#include "splitbeam/scenario.hpp"

namespace splitbeam {

/// Command entry points shared by the CLI and the test suites. Each writes its
/// CSV/SVG outputs under `out_dir` and reports to `os`. Returned exit codes:
/// 0 ok, 1 validation failure, 2 config error, 3 unsolvable operating point.
int run_noise(const ScenarioConfig& config, const std::string& out_dir, std::ostream& os);
int run_sql(const ScenarioConfig& config, const std::string& out_dir, std::ostream& os);
int run_spectrum(const ScenarioConfig& config, const std::string& out_dir, std::ostream& os);
int run_validate(const ScenarioConfig& config, const std::string& out_dir, std::ostream& os);

} // namespace splitbeam

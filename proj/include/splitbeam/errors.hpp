#pragma once

#include <stdexcept>
#include <string>

namespace splitbeam {

/// Scenario/config file problems (CLI exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Operating point cannot be back-solved from the requested targets (CLI exit code 3).
struct unsolvable_error : std::runtime_error {
    explicit unsolvable_error(const std::string& what) : std::runtime_error(what) {}
};

/// More than one mode carries a bright mean field.
struct unsupported_configuration : std::domain_error {
    explicit unsupported_configuration(const std::string& what) : std::domain_error(what) {}
};

/// Zero flux, zero density at the split, or similarly degenerate inputs.
struct degenerate_input : std::domain_error {
    explicit degenerate_input(const std::string& what) : std::domain_error(what) {}
};

/// Fock-space truncation too small for the requested accuracy.
struct cutoff_insufficient : std::domain_error {
    explicit cutoff_insufficient(const std::string& what) : std::domain_error(what) {}
};

} // namespace splitbeam

#pragma once

#include <string>

namespace splitbeam {

/// Shortest round-trippable decimal form of a double (deterministic output).
std::string format_number(double value);

/// Write a file atomically (temp file in the same directory, then rename).
/// Creates parent directories as needed.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace splitbeam

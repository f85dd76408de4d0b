#pragma once

#include <filesystem>
#include <string>

namespace fibising {

/// "%.17g" rendering: round-trips every double and is stable across runs.
std::string format_double(double v);

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace fibising

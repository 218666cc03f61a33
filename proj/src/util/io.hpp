#pragma once

#include <cstdio>
#include <filesystem>
#include <string>

namespace popctl::io {

/// Shortest form that round-trips a double; output files rely on it for
/// byte-identical reruns.
std::string num(double v);

/// Opens for writing, creating parent directories. Throws Error on failure.
std::FILE* open_out(const std::filesystem::path& path, const char* mode = "w");

}  // namespace popctl::io

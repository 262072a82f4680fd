#pragma once

#include <filesystem>

#include "nnls/grid.hpp"

namespace nnls {

/// Header line "NNLS1 d n L" followed by n^d little-endian float64 values in
/// row-major order (last axis fastest).
void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

/// d = 1 only: "x,value" rows.
void write_field_csv(const std::filesystem::path& path, const Field& f);

}  // namespace nnls

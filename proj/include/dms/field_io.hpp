#pragma once

#include <string>

#include "dms/grid.hpp"

namespace dms {

// Binary field format "DMSF": magic 0x44 0x4D 0x53 0x46, u32 version=1,
// u64 n, f64 extent, then n little-endian (f64 re, f64 im) pairs.
void write_dmsf(const std::string& path, const Field& f);
Field read_dmsf(const std::string& path);

}  // namespace dms

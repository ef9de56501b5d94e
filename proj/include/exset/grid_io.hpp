#pragma once

// XGRD grid files, version 1 (all integers and floats little-endian):
//
//   offset 0   4 bytes   magic "XGRD"
//   offset 4   u16       version = 1
//   offset 6   u8        d (1, 2 or 3)
//   offset 7   d x u64   dims n_1 .. n_d
//   ...        d x f64   spacing per axis
//   ...        prod n_k x f64 values, row-major (axis 0 slowest)
//
// The reader requires equal spacing on every axis.

#include <filesystem>
#include <string>
#include <string_view>

#include "exset/simulate.hpp"

namespace exset {

inline constexpr std::uint16_t kXgrdVersion = 1;

std::string encode_grid(const FieldRealization& field);
FieldRealization decode_grid(std::string_view bytes);

void write_grid(const FieldRealization& field, const std::filesystem::path& path);
FieldRealization read_grid(const std::filesystem::path& path);

}  // namespace exset

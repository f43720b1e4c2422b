#pragma once

#include <filesystem>
#include <iosfwd>

#include "tomolab/field.hpp"

namespace tomolab {

// Binary layout: "TOMF1", rank byte, then per axis a label byte (low nibble
// label, high nibble mode), start and step as f64, count as u64, periodic
// byte; values follow row-major as (re, im) f64 pairs. All little-endian.
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);
void save_field(const std::filesystem::path& path, const Field& f);
Field load_field(const std::filesystem::path& path);

// One row per node: axis coordinates, then re and im.
void write_csv(std::ostream& os, const Field& f);
void save_csv(const std::filesystem::path& path, const Field& f);

}  // namespace tomolab

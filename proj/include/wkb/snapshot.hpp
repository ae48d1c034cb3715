#pragma once

#include <filesystem>

#include "wkb/spectral_field.hpp"

namespace wkb {

// Field snapshot file: magic "WKBF", u32 version, u32 d, u32 n per axis,
// f64 L per axis, then complex f64 coefficients in row-major centered-lattice
// order, all little-endian.
void write_snapshot(const std::filesystem::path& path, const SpectralField& f);
SpectralField read_snapshot(const std::filesystem::path& path);

}  // namespace wkb

#pragma once

#include "fedmap/grid_map.hpp"

#include <filesystem>

namespace fedmap {

/// Loads an 8-bit PGM (P5), PPM (P6) or PNG raster; values scale to [0,1].
/// The format is sniffed from the file's magic bytes. Polarity and threshold
/// are not stored in images; callers set them from the run configuration.
GridMap load_map(const std::filesystem::path& path);

/// Saves as binary PGM/PPM/PNG depending on the extension (.pgm/.ppm/.png).
/// Quantizes to 8 bits; exact round-trip for values of the form k/255.
void save_map(const GridMap& map, const std::filesystem::path& path);

/// Value bytes of the 8-bit raster encoding (width*height*channels),
/// excluding any header.
std::size_t raw_value_bytes(const GridMap& map);

}  // namespace fedmap

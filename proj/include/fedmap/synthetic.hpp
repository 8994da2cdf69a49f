#pragma once

#include "fedmap/grid_map.hpp"

#include <cstdint>
#include <string>

namespace fedmap {

enum class TerrainKind : std::uint8_t {
    Crevasse = 0,  // long thin fissures with occasional bridges, glacier-like
    Crater = 1,    // circular rims with gap openings, plus scattered boulders
    Blocks = 2,    // rectangular obstacles
};

TerrainKind terrain_kind_from_string(const std::string& s);
std::string terrain_kind_to_string(TerrainKind kind);

/// Deterministic single-channel terrain, low values = traversable. Obstacle
/// density lands in roughly 10-40% depending on kind and seed.
GridMap generate_synthetic(TerrainKind kind, int size, std::uint64_t seed);

}  // namespace fedmap

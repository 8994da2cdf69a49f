#pragma once

#include "fedmap/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fedmap {

/// Which side of the threshold counts as traversable. Glacier-style maps are
/// dark-passable; the polarity field keeps the planner honest either way.
enum class Polarity : std::uint8_t {
    LowIsTraversable = 0,
    HighIsTraversable = 1,
};

Polarity polarity_from_string(const std::string& s);
std::string polarity_to_string(Polarity p);

/// Dense 2D cell array in a global reference frame. Values are row-major,
/// channel-interleaved, in [0,1].
struct GridMap {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<float> values;
    float traversable_threshold = 0.5f;
    Polarity polarity = Polarity::LowIsTraversable;

    static GridMap filled(int width, int height, int channels, float value);

    float& at(int y, int x, int c = 0) {
        return values[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float at(int y, int x, int c = 0) const {
        return values[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    bool in_bounds(int y, int x) const { return x >= 0 && x < width && y >= 0 && y < height; }

    void validate() const;
};

/// Rectangular agent region in cell coordinates, half-open: [x0,x1) x [y0,y1).
struct Region {
    int agent_id = 0;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    std::int64_t cell_count() const {
        return static_cast<std::int64_t>(width()) * static_cast<std::int64_t>(height());
    }
    void validate(int map_width, int map_height) const;
};

/// Boolean occupancy: true = traversable.
struct OccupancyGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> traversable;

    std::uint8_t& at(int y, int x) {
        return traversable[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t at(int y, int x) const {
        return traversable[static_cast<std::size_t>(y) * width + x];
    }
    bool in_bounds(int y, int x) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t count_traversable() const;
};

/// Channel mean; identity for single-channel maps.
GridMap to_single_channel(const GridMap& map);

/// Thresholds a map into an occupancy grid, honoring polarity. A value
/// exactly at the threshold is traversable (closed on the traversable side).
/// Multi-channel maps are reduced by channel mean first.
OccupancyGrid binarize(const GridMap& map, float threshold);

inline OccupancyGrid binarize(const GridMap& map) {
    return binarize(map, map.traversable_threshold);
}

enum class PartitionLayout : std::uint8_t { Grid = 0, Strips = 1 };

/// Splits the map into disjoint rectangles covering every cell. Grid layout
/// tiles near-square (4 agents -> quadrants); strips layout cuts horizontal
/// bands.
std::vector<Region> partition(const GridMap& map, int n_agents, PartitionLayout layout);

}  // namespace fedmap

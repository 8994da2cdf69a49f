#include "fedmap/grid_map.hpp"

#include <algorithm>
#include <cmath>

namespace fedmap {

Polarity polarity_from_string(const std::string& s) {
    if (s == "low" || s == "low-is-traversable") return Polarity::LowIsTraversable;
    if (s == "high" || s == "high-is-traversable") return Polarity::HighIsTraversable;
    throw ValidationError("unknown polarity '" + s + "' (expected 'low' or 'high')");
}

std::string polarity_to_string(Polarity p) {
    return p == Polarity::LowIsTraversable ? "low" : "high";
}

GridMap GridMap::filled(int width, int height, int channels, float value) {
    if (width < 1 || height < 1) throw ValidationError("GridMap: dims must be >= 1");
    if (channels != 1 && channels != 3) throw ValidationError("GridMap: channels must be 1 or 3");
    GridMap m;
    m.width = width;
    m.height = height;
    m.channels = channels;
    m.values.assign(static_cast<std::size_t>(width) * height * channels, value);
    return m;
}

void GridMap::validate() const {
    if (width < 1 || height < 1) throw ValidationError("GridMap: dims must be >= 1");
    if (channels != 1 && channels != 3) throw ValidationError("GridMap: channels must be 1 or 3");
    if (values.size() != static_cast<std::size_t>(width) * height * channels)
        throw ShapeError("GridMap: value buffer does not match dims");
    for (float v : values)
        if (!(v >= 0.0f && v <= 1.0f)) throw ValidationError("GridMap: values outside [0,1]");
}

void Region::validate(int map_width, int map_height) const {
    if (x0 < 0 || y0 < 0 || x1 > map_width || y1 > map_height)
        throw ValidationError("Region: outside map bounds");
    if (x1 <= x0 || y1 <= y0) throw ValidationError("Region: empty");
}

std::size_t OccupancyGrid::count_traversable() const {
    std::size_t n = 0;
    for (auto t : traversable) n += t != 0;
    return n;
}

GridMap to_single_channel(const GridMap& map) {
    map.validate();
    if (map.channels == 1) return map;
    GridMap out = GridMap::filled(map.width, map.height, 1, 0.0f);
    out.traversable_threshold = map.traversable_threshold;
    out.polarity = map.polarity;
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            float sum = 0.0f;
            for (int c = 0; c < map.channels; ++c) sum += map.at(y, x, c);
            out.at(y, x) = sum / static_cast<float>(map.channels);
        }
    return out;
}

OccupancyGrid binarize(const GridMap& map, float threshold) {
    const GridMap& mono = map.channels == 1 ? map : to_single_channel(map);
    mono.validate();
    OccupancyGrid occ;
    occ.width = mono.width;
    occ.height = mono.height;
    occ.traversable.resize(mono.cell_count());
    const bool low = map.polarity == Polarity::LowIsTraversable;
    for (std::size_t i = 0; i < occ.traversable.size(); ++i) {
        const float v = mono.values[i];
        occ.traversable[i] = low ? (v <= threshold) : (v >= threshold);
    }
    return occ;
}

namespace {

// Split `extent` into `parts` consecutive near-equal integer spans.
std::vector<int> split_extent(int extent, int parts) {
    std::vector<int> cuts(parts + 1);
    for (int i = 0; i <= parts; ++i)
        cuts[i] = static_cast<int>((static_cast<std::int64_t>(extent) * i) / parts);
    return cuts;
}

}  // namespace

std::vector<Region> partition(const GridMap& map, int n_agents, PartitionLayout layout) {
    map.validate();
    if (n_agents < 1) throw ValidationError("partition: n_agents must be >= 1");
    if (static_cast<std::int64_t>(n_agents) >
        static_cast<std::int64_t>(map.width) * map.height)
        throw ValidationError("partition: more agents than cells");

    int rows = 1, cols = n_agents;
    if (layout == PartitionLayout::Grid) {
        // Largest divisor pair (rows <= cols); primes degrade to strips.
        for (int r = static_cast<int>(std::sqrt(static_cast<double>(n_agents))); r >= 1; --r) {
            if (n_agents % r == 0) {
                rows = r;
                cols = n_agents / r;
                break;
            }
        }
    } else {
        rows = n_agents;
        cols = 1;
    }
    if (rows > map.height || cols > map.width)
        throw ValidationError("partition: tiles do not fit the map");

    const auto ys = split_extent(map.height, rows);
    const auto xs = split_extent(map.width, cols);
    std::vector<Region> regions;
    regions.reserve(n_agents);
    int id = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            Region reg{id, xs[c], ys[r], xs[c + 1], ys[r + 1]};
            reg.validate(map.width, map.height);
            regions.push_back(reg);
            ++id;
        }
    return regions;
}

}  // namespace fedmap

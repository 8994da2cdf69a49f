#pragma once

#include "fedmap/grid_map.hpp"

#include <vector>

namespace fedmap {

struct RefineConfig {
    int min_component_size = 200;
    int connectivity = 8;  // 4 or 8

    void validate() const {
        if (min_component_size < 1)
            throw ValidationError("RefineConfig: min_component_size must be >= 1");
        if (connectivity != 4 && connectivity != 8)
            throw ValidationError("RefineConfig: connectivity must be 4 or 8");
    }
};

/// Labels connected components of non-traversable cells. Returns labels
/// (-1 for traversable cells, otherwise 0..k-1) and per-component sizes.
struct ComponentLabels {
    std::vector<std::int32_t> labels;
    std::vector<std::size_t> sizes;
};
ComponentLabels label_obstacle_components(const OccupancyGrid& occ, int connectivity);

/// Single synchronous pass over a frozen copy: a non-traversable cell turns
/// traversable when at least 5 of its 3x3 neighbors (excluding itself) are
/// traversable. Border cells apply the same >=5 rule to the neighbors that
/// exist. Fills only toward traversable.
OccupancyGrid fill_gaps(const OccupancyGrid& occ, const RefineConfig& cfg);

/// Removes obstacle components smaller than min_component_size (strict
/// less-than). Never decreases the traversable cell count.
OccupancyGrid remove_speckles(const OccupancyGrid& occ, const RefineConfig& cfg);

/// binarize -> fill_gaps -> remove_speckles, re-embedded as a {0,1}-valued
/// single-channel GridMap honoring the input polarity.
GridMap refine(const GridMap& map, const RefineConfig& cfg);

}  // namespace fedmap

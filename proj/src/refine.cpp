#include "fedmap/refine.hpp"

#include <numeric>

namespace fedmap {

namespace {

// Two-pass union-find labeling.
class UnionFind {
public:
    std::int32_t make() {
        parent_.push_back(static_cast<std::int32_t>(parent_.size()));
        return parent_.back();
    }

    std::int32_t find(std::int32_t a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

    std::size_t count() const { return parent_.size(); }

private:
    std::vector<std::int32_t> parent_;
};

}  // namespace

ComponentLabels label_obstacle_components(const OccupancyGrid& occ, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw ValidationError("label_obstacle_components: connectivity must be 4 or 8");
    const int w = occ.width;
    const int h = occ.height;
    ComponentLabels out;
    out.labels.assign(static_cast<std::size_t>(w) * h, -1);
    UnionFind uf;

    // Scan pass: connect to already-visited neighbors (W, NW, N, NE).
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (occ.at(y, x)) continue;
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            std::int32_t label = -1;
            auto consider = [&](int ny, int nx) {
                if (nx < 0 || nx >= w || ny < 0) return;
                const std::int32_t nl = out.labels[static_cast<std::size_t>(ny) * w + nx];
                if (nl < 0) return;
                if (label < 0)
                    label = nl;
                else
                    uf.unite(label, nl);
            };
            consider(y, x - 1);
            consider(y - 1, x);
            if (connectivity == 8) {
                consider(y - 1, x - 1);
                consider(y - 1, x + 1);
            }
            if (label < 0) label = uf.make();
            out.labels[idx] = label;
        }

    // Resolve pass: compact labels and accumulate sizes.
    std::vector<std::int32_t> remap(uf.count(), -1);
    std::int32_t next = 0;
    for (auto& l : out.labels) {
        if (l < 0) continue;
        const std::int32_t root = uf.find(l);
        if (remap[root] < 0) {
            remap[root] = next++;
            out.sizes.push_back(0);
        }
        l = remap[root];
        ++out.sizes[l];
    }
    return out;
}

OccupancyGrid fill_gaps(const OccupancyGrid& occ, const RefineConfig& cfg) {
    cfg.validate();
    OccupancyGrid out = occ;
    const int w = occ.width;
    const int h = occ.height;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (occ.at(y, x)) continue;
            int traversable = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    traversable += occ.at(ny, nx) != 0;
                }
            if (traversable >= 5) out.at(y, x) = 1;
        }
    return out;
}

OccupancyGrid remove_speckles(const OccupancyGrid& occ, const RefineConfig& cfg) {
    cfg.validate();
    const ComponentLabels comps = label_obstacle_components(occ, cfg.connectivity);
    OccupancyGrid out = occ;
    for (std::size_t i = 0; i < out.traversable.size(); ++i) {
        const std::int32_t l = comps.labels[i];
        if (l >= 0 && comps.sizes[l] < static_cast<std::size_t>(cfg.min_component_size))
            out.traversable[i] = 1;
    }
    return out;
}

GridMap refine(const GridMap& map, const RefineConfig& cfg) {
    cfg.validate();
    OccupancyGrid occ = binarize(map);
    occ = fill_gaps(occ, cfg);
    occ = remove_speckles(occ, cfg);

    GridMap out = GridMap::filled(map.width, map.height, 1, 0.0f);
    out.traversable_threshold = map.traversable_threshold;
    out.polarity = map.polarity;
    const float trav_value = map.polarity == Polarity::LowIsTraversable ? 0.0f : 1.0f;
    const float obst_value = 1.0f - trav_value;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = occ.traversable[i] ? trav_value : obst_value;
    return out;
}

}  // namespace fedmap

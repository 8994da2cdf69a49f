#include "fedmap/train.hpp"

namespace fedmap {

namespace {

void fill_targets(MatrixF& targets, Eigen::Index row, const GridMap& map, int y, int x,
                  int out_channels) {
    if (map.channels == out_channels) {
        for (int c = 0; c < out_channels; ++c) targets(row, c) = map.at(y, x, c);
    } else if (map.channels == 1) {
        for (int c = 0; c < out_channels; ++c) targets(row, c) = map.at(y, x, 0);
    } else {
        // 3 -> fewer channels: channel mean.
        float sum = 0.0f;
        for (int c = 0; c < map.channels; ++c) sum += map.at(y, x, c);
        const float v = sum / static_cast<float>(map.channels);
        for (int c = 0; c < out_channels; ++c) targets(row, c) = v;
    }
}

}  // namespace

TrainBatch make_map_batch(const GridMap& map, int out_channels,
                          const std::vector<std::uint8_t>& mask) {
    map.validate();
    if (!mask.empty() && mask.size() != map.cell_count())
        throw ShapeError("make_map_batch: mask size does not match map");
    std::size_t n = mask.empty() ? map.cell_count() : 0;
    if (!mask.empty())
        for (auto m : mask) n += m != 0;
    if (n == 0) throw ValidationError("make_map_batch: empty observation mask");

    TrainBatch batch;
    batch.coords.resize(static_cast<Eigen::Index>(n), 2);
    batch.targets.resize(static_cast<Eigen::Index>(n), out_channels);
    Eigen::Index row = 0;
    for (int y = 0; y < map.height; ++y)
        for (int x = 0; x < map.width; ++x) {
            if (!mask.empty() && !mask[static_cast<std::size_t>(y) * map.width + x]) continue;
            batch.coords(row, 0) = (static_cast<float>(x) + 0.5f) / static_cast<float>(map.width);
            batch.coords(row, 1) = (static_cast<float>(y) + 0.5f) / static_cast<float>(map.height);
            fill_targets(batch.targets, row, map, y, x, out_channels);
            ++row;
        }
    return batch;
}

TrainBatch make_region_batch(const GridMap& global_map, const Region& region, int out_channels) {
    global_map.validate();
    region.validate(global_map.width, global_map.height);
    const std::int64_t n = region.cell_count();
    TrainBatch batch;
    batch.coords.resize(n, 2);
    batch.targets.resize(n, out_channels);
    Eigen::Index row = 0;
    for (int y = region.y0; y < region.y1; ++y)
        for (int x = region.x0; x < region.x1; ++x) {
            batch.coords(row, 0) =
                (static_cast<float>(x) + 0.5f) / static_cast<float>(global_map.width);
            batch.coords(row, 1) =
                (static_cast<float>(y) + 0.5f) / static_cast<float>(global_map.height);
            fill_targets(batch.targets, row, global_map, y, x, out_channels);
            ++row;
        }
    return batch;
}

GridMap render(const ModelParams& params, const FourierEncoder& encoder, int width, int height) {
    if (width < 1 || height < 1) throw ValidationError("render: dims must be >= 1");
    const int out_channels = params.config.out_channels;
    GridMap map = GridMap::filled(width, height, out_channels == 1 ? 1 : 3, 0.0f);
    if (out_channels != 1 && out_channels != 3)
        throw ValidationError("render: out_channels must be 1 or 3 to form a GridMap");

    // Row blocks bound the transient activation memory on large maps.
    const int block_rows = std::max(1, 16384 / std::max(1, width));
    for (int y0 = 0; y0 < height; y0 += block_rows) {
        const int y1 = std::min(height, y0 + block_rows);
        const Eigen::Index n = static_cast<Eigen::Index>(y1 - y0) * width;
        MatrixF coords(n, 2);
        Eigen::Index row = 0;
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < width; ++x) {
                coords(row, 0) = (static_cast<float>(x) + 0.5f) / static_cast<float>(width);
                coords(row, 1) = (static_cast<float>(y) + 0.5f) / static_cast<float>(height);
                ++row;
            }
        MatrixF pred = forward(params, encoder.encode(coords));
        row = 0;
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < width; ++x) {
                for (int c = 0; c < out_channels; ++c)
                    map.at(y, x, c) = std::clamp(pred(row, c), 0.0f, 1.0f);
                ++row;
            }
    }
    return map;
}

}  // namespace fedmap

#include "fedmap/synthetic.hpp"

#include "fedmap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fedmap {

TerrainKind terrain_kind_from_string(const std::string& s) {
    if (s == "crevasse") return TerrainKind::Crevasse;
    if (s == "crater") return TerrainKind::Crater;
    if (s == "blocks") return TerrainKind::Blocks;
    throw ValidationError("unknown terrain kind '" + s +
                          "' (expected crevasse, crater or blocks)");
}

std::string terrain_kind_to_string(TerrainKind kind) {
    switch (kind) {
        case TerrainKind::Crevasse: return "crevasse";
        case TerrainKind::Crater: return "crater";
        case TerrainKind::Blocks: return "blocks";
    }
    return "?";
}

namespace {

// Bilinearly interpolated lattice noise in [0,1], lattice step 16 cells.
struct ValueNoise {
    int lattice_w, lattice_h;
    std::vector<float> lattice;

    ValueNoise(int width, int height, std::mt19937_64& rng) {
        lattice_w = width / 16 + 2;
        lattice_h = height / 16 + 2;
        lattice.resize(static_cast<std::size_t>(lattice_w) * lattice_h);
        std::uniform_real_distribution<float> u(0.0f, 1.0f);
        for (auto& v : lattice) v = u(rng);
    }

    float sample(int x, int y) const {
        const float fx = static_cast<float>(x) / 16.0f;
        const float fy = static_cast<float>(y) / 16.0f;
        const int ix = static_cast<int>(fx);
        const int iy = static_cast<int>(fy);
        const float tx = fx - ix;
        const float ty = fy - iy;
        auto at = [this](int lx, int ly) {
            return lattice[static_cast<std::size_t>(ly) * lattice_w + lx];
        };
        const float top = at(ix, iy) * (1 - tx) + at(ix + 1, iy) * tx;
        const float bot = at(ix, iy + 1) * (1 - tx) + at(ix + 1, iy + 1) * tx;
        return top * (1 - ty) + bot * ty;
    }
};

struct Canvas {
    int size;
    std::vector<std::uint8_t> obstacle;

    explicit Canvas(int size_) : size(size_), obstacle(static_cast<std::size_t>(size_) * size_, 0) {}

    void mark(int x, int y) {
        if (x >= 0 && x < size && y >= 0 && y < size)
            obstacle[static_cast<std::size_t>(y) * size + x] = 1;
    }

    void mark_disc(int cx, int cy, int radius) {
        for (int y = cy - radius; y <= cy + radius; ++y)
            for (int x = cx - radius; x <= cx + radius; ++x)
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius) mark(x, y);
    }
};

void paint_crevasses(Canvas& canvas, std::mt19937_64& rng) {
    const int size = canvas.size;
    const int fissures = std::max(4, size / 12);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 0.18);
    for (int f = 0; f < fissures; ++f) {
        double x = u01(rng) * size;
        double y = u01(rng) * size;
        double heading = u01(rng) * 2.0 * M_PI;
        const int length = static_cast<int>((0.6 + 0.7 * u01(rng)) * size);
        const int width = 1 + static_cast<int>(u01(rng) * 2.0);  // 1..2 extra radius below
        int gap_left = 0;
        for (int step = 0; step < length; ++step) {
            heading += jitter(rng);
            x += std::cos(heading);
            y += std::sin(heading);
            if (gap_left > 0) {
                --gap_left;  // snow bridge: leave a passable break
            } else if (u01(rng) < 0.05) {
                gap_left = 2 + static_cast<int>(u01(rng) * 4.0);
            } else {
                canvas.mark_disc(static_cast<int>(x), static_cast<int>(y), width - 1);
            }
        }
    }
}

void paint_craters(Canvas& canvas, std::mt19937_64& rng) {
    const int size = canvas.size;
    const int craters = std::max(4, (size * size) / 2600);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int c = 0; c < craters; ++c) {
        const int cx = static_cast<int>(u01(rng) * size);
        const int cy = static_cast<int>(u01(rng) * size);
        const double radius = size / 18.0 + u01(rng) * (size / 7.0 - size / 18.0);
        const double thickness = std::max(1.5, radius / 5.0);
        // One or two gap openings so rims rarely seal off regions.
        const double gap1 = u01(rng) * 2.0 * M_PI;
        const double gap2 = u01(rng) * 2.0 * M_PI;
        const double gap_half = 0.35 + 0.3 * u01(rng);
        const int r_hi = static_cast<int>(radius + thickness) + 1;
        for (int dy = -r_hi; dy <= r_hi; ++dy)
            for (int dx = -r_hi; dx <= r_hi; ++dx) {
                const double d = std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy);
                if (std::abs(d - radius) > thickness / 2.0) continue;
                const double ang = std::atan2(static_cast<double>(dy), static_cast<double>(dx));
                auto in_gap = [ang](double g, double half) {
                    double diff = std::remainder(ang - g, 2.0 * M_PI);
                    return std::abs(diff) < half;
                };
                if (in_gap(gap1, gap_half) || in_gap(gap2, gap_half * 0.7)) continue;
                canvas.mark(cx + dx, cy + dy);
            }
    }
    // Scattered boulders.
    const int boulders = std::max(6, (size * size) / 1400);
    for (int b = 0; b < boulders; ++b) {
        const int bx = static_cast<int>(u01(rng) * size);
        const int by = static_cast<int>(u01(rng) * size);
        canvas.mark_disc(bx, by, 1 + static_cast<int>(u01(rng) * (size / 48.0 + 1.0)));
    }
}

void paint_blocks(Canvas& canvas, std::mt19937_64& rng) {
    const int size = canvas.size;
    const int blocks = std::max(6, (size * size) / 1100);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int b = 0; b < blocks; ++b) {
        const int w = std::max(2, static_cast<int>((0.3 + 0.7 * u01(rng)) * size / 8.0));
        const int h = std::max(2, static_cast<int>((0.3 + 0.7 * u01(rng)) * size / 8.0));
        const int x0 = static_cast<int>(u01(rng) * (size - w));
        const int y0 = static_cast<int>(u01(rng) * (size - h));
        for (int y = y0; y < y0 + h; ++y)
            for (int x = x0; x < x0 + w; ++x) canvas.mark(x, y);
    }
}

}  // namespace

GridMap generate_synthetic(TerrainKind kind, int size, std::uint64_t seed) {
    if (size < 32) throw ValidationError("generate_synthetic: size must be >= 32");
    std::mt19937_64 rng(seed);
    Canvas canvas(size);
    switch (kind) {
        case TerrainKind::Crevasse: paint_crevasses(canvas, rng); break;
        case TerrainKind::Crater: paint_craters(canvas, rng); break;
        case TerrainKind::Blocks: paint_blocks(canvas, rng); break;
    }

    ValueNoise noise(size, size, rng);
    GridMap map = GridMap::filled(size, size, 1, 0.0f);
    map.polarity = Polarity::LowIsTraversable;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const float n = noise.sample(x, y);
            const bool obst = canvas.obstacle[static_cast<std::size_t>(y) * size + x] != 0;
            map.at(y, x) = obst ? 0.78f + 0.2f * n : 0.04f + 0.2f * n;
        }
    return map;
}

}  // namespace fedmap

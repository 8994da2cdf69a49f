#include "fedmap/map_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace fedmap {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

// --- PNM (P5/P6) ------------------------------------------------------------

struct PnmParser {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("PNM parse error at byte offset " + std::to_string(pos) + ": " + what);
    }

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            const char c = static_cast<char>(bytes[pos]);
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                return;
            }
        }
    }

    int parse_int() {
        skip_space_and_comments();
        if (pos >= bytes.size()) fail("unexpected end of header");
        if (!std::isdigit(bytes[pos])) fail("expected digit");
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1'000'000'000L) fail("absurd header value");
            ++pos;
        }
        return static_cast<int>(v);
    }
};

GridMap load_pnm(const std::vector<std::uint8_t>& bytes) {
    PnmParser p{bytes};
    if (bytes.size() < 2) p.fail("file too short");
    const int channels = bytes[1] == '5' ? 1 : 3;
    p.pos = 2;
    const int width = p.parse_int();
    const int height = p.parse_int();
    const int maxval = p.parse_int();
    if (width < 1 || height < 1) p.fail("non-positive dimensions");
    if (maxval != 255) p.fail("unsupported bit depth (maxval " + std::to_string(maxval) + ")");
    // Exactly one whitespace byte separates the header from the raster.
    if (p.pos >= bytes.size() || !std::isspace(bytes[p.pos])) p.fail("missing raster separator");
    ++p.pos;
    const std::size_t expected = static_cast<std::size_t>(width) * height * channels;
    if (bytes.size() - p.pos < expected)
        throw ParseError("PNM parse error at byte offset " + std::to_string(bytes.size()) +
                         ": raster truncated (expected " + std::to_string(expected) + " bytes)");

    GridMap map = GridMap::filled(width, height, channels, 0.0f);
    for (std::size_t i = 0; i < expected; ++i)
        map.values[i] = static_cast<float>(bytes[p.pos + i]) / 255.0f;
    return map;
}

// --- PNG ---------------------------------------------------------------------

struct PngReadCtx {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void png_read_fn(png_structp png, png_bytep out, png_size_t n) {
    auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
    if (ctx->pos + n > ctx->size) png_error(png, "unexpected end of PNG stream");
    std::memcpy(out, ctx->data + ctx->pos, n);
    ctx->pos += n;
}

GridMap load_png(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }
    PngReadCtx ctx{bytes.data(), bytes.size(), 0};
    std::vector<std::vector<png_byte>> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError("PNG parse error near byte offset " + std::to_string(ctx.pos) + " in " +
                         path.string());
    }
    png_set_read_fn(png, &ctx, png_read_fn);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError("PNG parse error: interlaced images unsupported (" + path.string() + ")");
    }
    if (bit_depth != 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError("PNG parse error: unsupported bit depth " + std::to_string(bit_depth) +
                         " (" + path.string() + ")");
    }
    // Normalize palette/alpha variants down to gray or RGB.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError("PNG parse error: unsupported channel count " +
                         std::to_string(channels) + " (" + path.string() + ")");
    }

    rows.assign(height, std::vector<png_byte>(static_cast<std::size_t>(width) * channels));
    std::vector<png_bytep> row_ptrs(height);
    for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = rows[y].data();
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GridMap map = GridMap::filled(static_cast<int>(width), static_cast<int>(height), channels, 0.0f);
    for (png_uint_32 y = 0; y < height; ++y)
        for (std::size_t i = 0; i < rows[y].size(); ++i)
            map.values[static_cast<std::size_t>(y) * width * channels + i] =
                static_cast<float>(rows[y][i]) / 255.0f;
    return map;
}

void save_png(const GridMap& map, const std::filesystem::path& path) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw IoError("cannot open " + path.string() + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("PNG write failed for " + path.string());
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, map.width, map.height, 8,
                 map.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(static_cast<std::size_t>(map.width) * map.channels);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x)
            for (int c = 0; c < map.channels; ++c)
                row[static_cast<std::size_t>(x) * map.channels + c] = static_cast<png_byte>(
                    std::lround(std::min(1.0f, std::max(0.0f, map.at(y, x, c))) * 255.0f));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

void save_pnm(const GridMap& map, const std::filesystem::path& path, bool color) {
    if (color && map.channels != 3) throw ValidationError("PPM requires a 3-channel map");
    if (!color && map.channels != 1) throw ValidationError("PGM requires a 1-channel map");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << (color ? "P6" : "P5") << "\n" << map.width << " " << map.height << "\n255\n";
    std::vector<std::uint8_t> raster(map.values.size());
    for (std::size_t i = 0; i < map.values.size(); ++i)
        raster[i] = static_cast<std::uint8_t>(
            std::lround(std::min(1.0f, std::max(0.0f, map.values[i])) * 255.0f));
    out.write(reinterpret_cast<const char*>(raster.data()),
              static_cast<std::streamsize>(raster.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

GridMap load_map(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
        return load_pnm(bytes);
    static const std::uint8_t png_sig[4] = {0x89, 'P', 'N', 'G'};
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), png_sig, 4) == 0)
        return load_png(bytes, path);
    throw ParseError("unrecognized raster format at byte offset 0 in " + path.string() +
                     " (expected P5/P6 PNM or PNG)");
}

void save_map(const GridMap& map, const std::filesystem::path& path) {
    map.validate();
    const auto ext = path.extension().string();
    if (ext == ".pgm") {
        save_pnm(map.channels == 1 ? map : to_single_channel(map), path, false);
    } else if (ext == ".ppm") {
        save_pnm(map, path, true);
    } else if (ext == ".png") {
        save_png(map, path);
    } else {
        throw ValidationError("unsupported map extension '" + ext + "' (use .pgm/.ppm/.png)");
    }
}

std::size_t raw_value_bytes(const GridMap& map) {
    return static_cast<std::size_t>(map.width) * map.height * map.channels;
}

}  // namespace fedmap

#include "fedmap/params_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace fedmap {

namespace {

constexpr char kMagic[8] = {'F', 'M', 'A', 'P', 'P', 'R', 'M', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kTensorEntryBytes = 12;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return offset_; }

    void need(std::size_t n) const {
        if (offset_ + n > bytes_.size())
            throw ParseError("parameter container truncated at byte offset " +
                             std::to_string(offset_) + " (need " + std::to_string(n) +
                             " more bytes)");
    }

    std::uint8_t u8() {
        need(1);
        return bytes_[offset_++];
    }

    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(bytes_[offset_]) |
                          static_cast<std::uint16_t>(bytes_[offset_ + 1]) << 8;
        offset_ += 2;
        return v;
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[offset_ + i]) << (8 * i);
        offset_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[offset_ + i]) << (8 * i);
        offset_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t offset_ = 0;
};

void append_value(std::vector<std::uint8_t>& out, float v, Precision precision,
                  std::size_t& overflow_count) {
    if (precision == Precision::Fp32) {
        put_u32(out, std::bit_cast<std::uint32_t>(v));
    } else {
        bool overflowed = false;
        put_u16(out, float_to_half(v, &overflowed));
        if (overflowed) ++overflow_count;
    }
}

// Writes one tensor's values row-major.
void append_tensor(std::vector<std::uint8_t>& out, const TensorInfo& info, const float* data,
                   Precision precision, std::size_t& overflow_count) {
    if (info.cols > 0) {
        // Matrices are stored column-major in memory; the file is row-major.
        for (int r = 0; r < info.rows; ++r)
            for (int c = 0; c < info.cols; ++c)
                append_value(out, data[static_cast<std::size_t>(c) * info.rows + r], precision,
                             overflow_count);
    } else {
        for (int i = 0; i < info.rows; ++i) append_value(out, data[i], precision, overflow_count);
    }
}

}  // namespace

std::uint16_t float_to_half(float f, bool* overflowed) {
    const std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
    const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 16) & 0x8000u);
    const std::uint32_t exp = (bits >> 23) & 0xFFu;
    std::uint32_t mant = bits & 0x7FFFFFu;

    if (exp == 0xFFu) {
        if (mant != 0) return sign | 0x7E00u;  // NaN
        if (overflowed) *overflowed = true;    // +-inf saturates
        return sign | 0x7BFFu;
    }
    const int half_exp = static_cast<int>(exp) - 127 + 15;
    if (half_exp >= 31) {
        if (overflowed) *overflowed = true;
        return sign | 0x7BFFu;  // +-65504
    }
    if (half_exp <= 0) {
        if (half_exp < -10) return sign;  // underflows to zero
        mant |= 0x800000u;
        const std::uint32_t shift = static_cast<std::uint32_t>(14 - half_exp);
        std::uint32_t half_mant = mant >> shift;
        const std::uint32_t rem = mant & ((1u << shift) - 1);
        const std::uint32_t halfway = 1u << (shift - 1);
        if (rem > halfway || (rem == halfway && (half_mant & 1u))) ++half_mant;
        return static_cast<std::uint16_t>(sign | half_mant);
    }
    std::uint16_t h =
        static_cast<std::uint16_t>(sign | (static_cast<std::uint32_t>(half_exp) << 10) | (mant >> 13));
    const std::uint32_t rem = mant & 0x1FFFu;
    if (rem > 0x1000u || (rem == 0x1000u && (h & 1u))) {
        ++h;
        if ((h & 0x7C00u) == 0x7C00u) {  // rounding crossed into infinity
            if (overflowed) *overflowed = true;
            h = sign | 0x7BFFu;
        }
    }
    return h;
}

float half_to_float(std::uint16_t h) {
    const std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000u) << 16;
    const std::uint32_t exp = (h >> 10) & 0x1Fu;
    std::uint32_t mant = h & 0x3FFu;
    std::uint32_t bits;
    if (exp == 0) {
        if (mant == 0) {
            bits = sign;
        } else {
            int shift = 0;
            while (!(mant & 0x400u)) {
                mant <<= 1;
                ++shift;
            }
            bits = sign | (static_cast<std::uint32_t>(127 - 15 - shift) << 23) |
                   ((mant & 0x3FFu) << 13);
        }
    } else if (exp == 31) {
        bits = sign | 0x7F800000u | (mant << 13);
    } else {
        bits = sign | ((exp - 15 + 127) << 23) | (mant << 13);
    }
    return std::bit_cast<float>(bits);
}

std::size_t trainable_payload_bytes(const NetworkConfig& cfg, Precision precision) {
    return static_cast<std::size_t>(count_params(cfg)) * bytes_per_value(precision);
}

std::size_t container_header_bytes(const NetworkConfig& cfg) {
    const std::size_t tensor_count =
        static_cast<std::size_t>(cfg.hidden_layers) * (cfg.use_batchnorm ? 6 : 2) + 2;
    return 8 + 4 + 1 + 1 + 2 + 4 + 4 + 8 + 8 + 4 * 4 + 4 + tensor_count * kTensorEntryBytes;
}

std::vector<std::uint8_t> serialize_params(const ModelParams& params,
                                           const EncoderConfig& encoder, Precision precision,
                                           SerializeStats* stats) {
    const NetworkConfig& cfg = params.config;
    cfg.validate();
    encoder.validate();
    bool finite = true;
    visit_params(params, [&finite](const TensorInfo&, const float* data, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i)
            if (!std::isfinite(data[i])) finite = false;
    });
    if (!finite) throw ValidationError("serialize_params: parameters contain non-finite values");

    std::vector<std::uint8_t> out;
    out.reserve(container_header_bytes(cfg) +
                trainable_payload_bytes(cfg, precision) * 2);
    out.insert(out.end(), kMagic, kMagic + 8);
    put_u32(out, kVersion);
    out.push_back(static_cast<std::uint8_t>(precision));
    out.push_back(cfg.use_batchnorm ? 1 : 0);
    put_u16(out, 0);
    put_u32(out, static_cast<std::uint32_t>(encoder.input_dims));
    put_u32(out, static_cast<std::uint32_t>(encoder.mapping_size));
    put_f64(out, encoder.scale);
    put_u64(out, encoder.seed);
    put_u32(out, static_cast<std::uint32_t>(cfg.in_channels));
    put_u32(out, static_cast<std::uint32_t>(cfg.hidden_channels));
    put_u32(out, static_cast<std::uint32_t>(cfg.hidden_layers));
    put_u32(out, static_cast<std::uint32_t>(cfg.out_channels));

    // Tensor table: trainables first, then running statistics, matching the
    // value section order.
    std::vector<std::pair<TensorInfo, const float*>> trainables, running;
    visit_params(params, [&](const TensorInfo& info, const float* data, std::size_t) {
        (is_trainable(info.role) ? trainables : running).emplace_back(info, data);
    });
    put_u32(out, static_cast<std::uint32_t>(trainables.size() + running.size()));
    auto put_entry = [&out](const TensorInfo& info) {
        out.push_back(static_cast<std::uint8_t>(info.role));
        out.push_back(0);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(info.layer)));
        put_u32(out, static_cast<std::uint32_t>(info.rows));
        put_u32(out, static_cast<std::uint32_t>(info.cols));
    };
    for (const auto& entry : trainables) put_entry(entry.first);
    for (const auto& entry : running) put_entry(entry.first);

    SerializeStats local;
    local.header_bytes = out.size();
    for (const auto& [info, data] : trainables)
        append_tensor(out, info, data, precision, local.overflow_count);
    local.trainable_payload_bytes = out.size() - local.header_bytes;
    for (const auto& [info, data] : running)
        append_tensor(out, info, data, precision, local.overflow_count);
    local.stats_payload_bytes = out.size() - local.header_bytes - local.trainable_payload_bytes;
    local.total_bytes = out.size();
    if (stats) *stats = local;
    return out;
}

LoadedParams deserialize_params(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    r.need(8);
    if (std::memcmp(bytes.data(), kMagic, 8) != 0)
        throw ParseError("parameter container: bad magic at byte offset 0");
    for (int i = 0; i < 8; ++i) r.u8();
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw ParseError("parameter container: unsupported version " + std::to_string(version) +
                         " at byte offset 8");
    const std::uint8_t precision_byte = r.u8();
    if (precision_byte > 1)
        throw ParseError("parameter container: bad precision byte at offset 12");
    const Precision precision = static_cast<Precision>(precision_byte);
    const bool use_batchnorm = r.u8() != 0;
    r.u16();  // reserved

    LoadedParams loaded;
    loaded.precision = precision;
    loaded.encoder.input_dims = static_cast<int>(r.u32());
    loaded.encoder.mapping_size = static_cast<int>(r.u32());
    loaded.encoder.scale = r.f64();
    loaded.encoder.seed = r.u64();

    NetworkConfig cfg;
    cfg.in_channels = static_cast<int>(r.u32());
    cfg.hidden_channels = static_cast<int>(r.u32());
    cfg.hidden_layers = static_cast<int>(r.u32());
    cfg.out_channels = static_cast<int>(r.u32());
    cfg.use_batchnorm = use_batchnorm;
    cfg.validate();
    loaded.encoder.validate();

    // Materialize zero params with the right shapes, then fill from the file.
    loaded.params = init_params<float>(cfg, 0);
    const std::uint32_t tensor_count = r.u32();
    std::vector<std::pair<TensorInfo, float*>> trainables, running;
    visit_params(loaded.params, [&](const TensorInfo& info, float* data, std::size_t) {
        (is_trainable(info.role) ? trainables : running).emplace_back(info, data);
    });
    if (tensor_count != trainables.size() + running.size())
        throw ParseError("parameter container: tensor count " + std::to_string(tensor_count) +
                         " does not match configuration");

    std::vector<std::pair<TensorInfo, float*>> ordered = trainables;
    ordered.insert(ordered.end(), running.begin(), running.end());
    for (const auto& entry : ordered) {
        const TensorInfo& info = entry.first;
        const std::size_t entry_offset = r.offset();
        const TensorRole role = static_cast<TensorRole>(r.u8());
        r.u8();
        const int layer = static_cast<std::int16_t>(r.u16());
        const int rows = static_cast<int>(r.u32());
        const int cols = static_cast<int>(r.u32());
        if (role != info.role || layer != info.layer || rows != info.rows || cols != info.cols)
            throw ParseError("parameter container: tensor table mismatch at byte offset " +
                             std::to_string(entry_offset));
    }

    auto read_value = [&r, precision]() {
        if (precision == Precision::Fp32) return std::bit_cast<float>(r.u32());
        return half_to_float(r.u16());
    };
    for (const auto& [info, data] : ordered) {
        if (info.cols > 0) {
            for (int row = 0; row < info.rows; ++row)
                for (int col = 0; col < info.cols; ++col)
                    data[static_cast<std::size_t>(col) * info.rows + row] = read_value();
        } else {
            for (int i = 0; i < info.rows; ++i) data[i] = read_value();
        }
    }
    return loaded;
}

void save_params_file(const std::filesystem::path& path, const ModelParams& params,
                      const EncoderConfig& encoder, Precision precision, SerializeStats* stats) {
    const auto bytes = serialize_params(params, encoder, precision, stats);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

LoadedParams load_params_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize_params(bytes);
}

}  // namespace fedmap

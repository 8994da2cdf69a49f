#pragma once

#include "fedmap/encoder.hpp"
#include "fedmap/model.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fedmap {

enum class Precision : std::uint8_t { Fp32 = 0, Fp16 = 1 };

inline std::size_t bytes_per_value(Precision p) { return p == Precision::Fp32 ? 4 : 2; }

/// IEEE 754 binary16 conversion, round-to-nearest-even. Values beyond the
/// half range saturate to +-65504 and set *overflowed.
std::uint16_t float_to_half(float f, bool* overflowed = nullptr);
float half_to_float(std::uint16_t h);

struct SerializeStats {
    std::size_t overflow_count = 0;       // fp16 saturations
    std::size_t header_bytes = 0;         // magic..tensor table
    std::size_t trainable_payload_bytes = 0;
    std::size_t stats_payload_bytes = 0;  // BN running statistics section
    std::size_t total_bytes = 0;
};

/// Container layout (all integers little-endian):
///   magic "FMAPPRM1" (8)  | u32 version | u8 precision | u8 use_batchnorm
///   u16 reserved          | u32 input_dims | u32 mapping_size | f64 scale
///   u64 encoder_seed      | u32 in_channels | u32 hidden_channels
///   u32 hidden_layers     | u32 out_channels | u32 tensor_count
///   tensor table: per tensor u8 role, u8 pad, i16 layer, u32 rows, u32 cols
///   values, row-major per tensor: all trainables in visitation order, then
///   all BatchNorm running statistics.
std::vector<std::uint8_t> serialize_params(const ModelParams& params,
                                           const EncoderConfig& encoder, Precision precision,
                                           SerializeStats* stats = nullptr);

struct LoadedParams {
    ModelParams params;
    EncoderConfig encoder;
    Precision precision = Precision::Fp32;
};

LoadedParams deserialize_params(std::span<const std::uint8_t> bytes);

void save_params_file(const std::filesystem::path& path, const ModelParams& params,
                      const EncoderConfig& encoder, Precision precision,
                      SerializeStats* stats = nullptr);
LoadedParams load_params_file(const std::filesystem::path& path);

/// Exact byte counts implied by a configuration.
std::size_t trainable_payload_bytes(const NetworkConfig& cfg, Precision precision);
std::size_t container_header_bytes(const NetworkConfig& cfg);

}  // namespace fedmap

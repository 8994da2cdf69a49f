#pragma once

#include "fedmap/common.hpp"
#include "fedmap/rng.hpp"

#include <cmath>

namespace fedmap {

struct EncoderConfig {
    int input_dims = 2;
    int mapping_size = 128;
    double scale = 10.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (input_dims != 2)
            throw ValidationError("EncoderConfig: input_dims must be 2");
        if (mapping_size < 1)
            throw ValidationError("EncoderConfig: mapping_size must be >= 1");
        if (!(scale > 0.0))
            throw ValidationError("EncoderConfig: scale must be > 0");
    }
};

/// Random Fourier feature encoding of 2D coordinates. The frequency matrix is
/// drawn once from the experiment seed and then frozen: every agent and the
/// server regenerate the identical matrix, so it is never transmitted and
/// parameter averaging stays coherent across parties.
template <typename Scalar>
struct FourierEncoderT {
    EncoderConfig config;
    Matrix<Scalar> frequencies;  // mapping_size x input_dims, N(0,1) * scale

    static FourierEncoderT create(const EncoderConfig& cfg) {
        cfg.validate();
        FourierEncoderT enc;
        enc.config = cfg;
        enc.frequencies.resize(cfg.mapping_size, cfg.input_dims);
        GaussianSampler gauss(cfg.seed);
        for (int i = 0; i < cfg.mapping_size; ++i)
            for (int j = 0; j < cfg.input_dims; ++j)
                enc.frequencies(i, j) = static_cast<Scalar>(gauss.next() * cfg.scale);
        return enc;
    }

    int feature_dims() const { return 2 * config.mapping_size; }

    /// coords: N x input_dims -> N x 2*mapping_size, rows
    /// [cos(2*pi*B*v) || sin(2*pi*B*v)].
    Matrix<Scalar> encode(const Matrix<Scalar>& coords) const {
        if (coords.cols() != config.input_dims)
            throw ShapeError("encode: coords have " + std::to_string(coords.cols()) +
                             " columns, encoder expects " + std::to_string(config.input_dims));
        if (!coords.allFinite())
            throw ValidationError("encode: coords contain non-finite values");
        const int m = config.mapping_size;
        const Scalar two_pi = static_cast<Scalar>(2.0 * M_PI);
        Matrix<Scalar> phase = two_pi * (coords * frequencies.transpose());
        Matrix<Scalar> out(coords.rows(), 2 * m);
        out.leftCols(m) = phase.array().cos().matrix();
        out.rightCols(m) = phase.array().sin().matrix();
        return out;
    }
};

using FourierEncoder = FourierEncoderT<float>;

}  // namespace fedmap

#pragma once

#include "fedmap/grid_map.hpp"
#include "fedmap/model.hpp"
#include "fedmap/optim.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace fedmap {

struct FitOptions {
    int iters = 100;
    double lr = 1e-4;
    /// 0 = full batch (the default training regime); otherwise one optimizer
    /// step per minibatch, reshuffled each epoch from shuffle_seed.
    int batch_size = 0;
    std::uint64_t shuffle_seed = 0;
    /// When > 0, abort with NumericError once loss exceeds
    /// divergence_factor * initial loss.
    double divergence_factor = 0.0;
};

struct FitStats {
    int steps = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    /// Fraction of steps whose loss did not increase; tracked for logging,
    /// never enforced.
    double monotone_fraction = 1.0;
};

/// Runs `opts.iters` ADAM steps minimizing MSE over the given (pre-encoded)
/// features/targets.
template <typename Scalar>
void fit_features(ModelParamsT<Scalar>& params, AdamStateT<Scalar>& adam,
                  const Matrix<Scalar>& features, const Matrix<Scalar>& targets,
                  const FitOptions& opts, FitStats* stats = nullptr) {
    if (features.rows() == 0) throw ValidationError("fit: empty batch");
    if (!(opts.lr > 0.0)) throw ValidationError("fit: lr must be > 0");
    if (opts.iters < 0) throw ValidationError("fit: iters must be >= 0");

    FitStats local;
    const Eigen::Index n = features.rows();
    const bool minibatch = opts.batch_size > 0 && opts.batch_size < n;
    std::vector<int> order;
    std::mt19937_64 shuffle_rng(opts.shuffle_seed);
    Eigen::Index cursor = 0;
    if (minibatch) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), shuffle_rng);
    }

    double prev_loss = 0.0;
    double divergence_limit = 0.0;
    int non_increasing = 0;
    ForwardCacheT<Scalar> cache;
    for (int it = 0; it < opts.iters; ++it) {
        const Matrix<Scalar>* batch_x = &features;
        const Matrix<Scalar>* batch_y = &targets;
        Matrix<Scalar> sub_x, sub_y;
        if (minibatch) {
            const Eigen::Index b = std::min<Eigen::Index>(opts.batch_size, n - cursor);
            sub_x.resize(b, features.cols());
            sub_y.resize(b, targets.cols());
            for (Eigen::Index i = 0; i < b; ++i) {
                sub_x.row(i) = features.row(order[cursor + i]);
                sub_y.row(i) = targets.row(order[cursor + i]);
            }
            cursor += b;
            if (cursor >= n) {
                cursor = 0;
                std::shuffle(order.begin(), order.end(), shuffle_rng);
            }
            batch_x = &sub_x;
            batch_y = &sub_y;
        }

        forward_train(params, *batch_x, cache);
        const double loss = static_cast<double>(mse_loss<Scalar>(cache.predictions, *batch_y));
        if (!std::isfinite(loss)) throw NumericError("fit: non-finite loss at step " + std::to_string(it));
        if (it == 0) {
            local.initial_loss = loss;
            prev_loss = loss;
            divergence_limit = opts.divergence_factor > 0.0
                                   ? opts.divergence_factor * std::max(loss, 1e-12)
                                   : 0.0;
            ++non_increasing;
        } else {
            if (loss <= prev_loss) ++non_increasing;
            prev_loss = loss;
        }
        if (divergence_limit > 0.0 && loss > divergence_limit)
            throw NumericError("fit: training diverged (loss " + std::to_string(loss) +
                               " exceeded " + std::to_string(divergence_limit) + ")");

        GradientsT<Scalar> grads = detail::backward_from_cache(params, *batch_x, *batch_y, cache);
        adam_step(params, grads, adam, static_cast<Scalar>(opts.lr));
        local.final_loss = loss;
        ++local.steps;
    }
    if (local.steps > 0)
        local.monotone_fraction = static_cast<double>(non_increasing) / local.steps;
    if (stats) *stats = local;
}

/// Spec-level fit over a TrainBatch with a fresh optimizer; encodes once and
/// reuses the features for every iteration.
template <typename Scalar>
void fit(ModelParamsT<Scalar>& params, const TrainBatchT<Scalar>& batch,
         const FourierEncoderT<Scalar>& encoder, const FitOptions& opts,
         FitStats* stats = nullptr) {
    batch.validate();
    if (batch.targets.cols() != params.config.out_channels)
        throw ShapeError("fit: target columns do not match out_channels");
    AdamStateT<Scalar> adam = make_adam_state(params);
    fit_features(params, adam, encoder.encode(batch.coords), batch.targets, opts, stats);
}

/// Batch over the masked cells of a map in the map's own [0,1]^2 frame.
/// mask may be empty (all cells observed) or one byte per cell.
TrainBatch make_map_batch(const GridMap& map, int out_channels,
                          const std::vector<std::uint8_t>& mask = {});

/// Batch over a region crop of the global map, with coordinates normalized
/// by the *global* extents so that every agent trains in the shared frame.
TrainBatch make_region_batch(const GridMap& global_map, const Region& region, int out_channels);

/// Evaluates the network at every cell center ((x+0.5)/width, (y+0.5)/height)
/// in eval mode and clamps to [0,1]. Pure function of its inputs.
GridMap render(const ModelParams& params, const FourierEncoder& encoder, int width, int height);

}  // namespace fedmap

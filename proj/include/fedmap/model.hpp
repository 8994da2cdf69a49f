#pragma once

#include "fedmap/common.hpp"
#include "fedmap/encoder.hpp"
#include "fedmap/rng.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fedmap {

struct NetworkConfig {
    int in_channels = 256;  // must equal 2 * encoder mapping_size
    int hidden_channels = 256;
    int hidden_layers = 3;
    int out_channels = 3;
    bool use_batchnorm = true;

    void validate() const {
        if (in_channels < 1) throw ValidationError("NetworkConfig: in_channels must be >= 1");
        if (hidden_channels < 1)
            throw ValidationError("NetworkConfig: hidden_channels must be >= 1");
        if (hidden_layers < 0)
            throw ValidationError("NetworkConfig: hidden_layers must be >= 0");
        if (out_channels < 1) throw ValidationError("NetworkConfig: out_channels must be >= 1");
    }

    bool operator==(const NetworkConfig&) const = default;
};

/// Exact trainable parameter count; BatchNorm running statistics excluded.
inline std::int64_t count_params(const NetworkConfig& cfg) {
    cfg.validate();
    std::int64_t total = 0;
    int fan_in = cfg.in_channels;
    for (int l = 0; l < cfg.hidden_layers; ++l) {
        total += static_cast<std::int64_t>(cfg.hidden_channels) * fan_in + cfg.hidden_channels;
        if (cfg.use_batchnorm) total += 2 * cfg.hidden_channels;
        fan_in = cfg.hidden_channels;
    }
    total += static_cast<std::int64_t>(cfg.out_channels) * fan_in + cfg.out_channels;
    return total;
}

template <typename Scalar>
struct HiddenLayerT {
    Matrix<Scalar> weight;  // hidden x fan_in
    Vector<Scalar> bias;
    // Present only when use_batchnorm. Running statistics travel with the
    // parameters (federation averages them like trainables) but never
    // receive gradients.
    Vector<Scalar> bn_gamma;
    Vector<Scalar> bn_beta;
    Vector<Scalar> running_mean;
    Vector<Scalar> running_var;
};

template <typename Scalar>
struct ModelParamsT {
    NetworkConfig config;
    std::vector<HiddenLayerT<Scalar>> hidden;
    Matrix<Scalar> out_weight;  // out x fan_in
    Vector<Scalar> out_bias;
};

using ModelParams = ModelParamsT<float>;

/// Gradients for every trainable tensor, shapes mirroring ModelParams.
template <typename Scalar>
struct GradientsT {
    struct HiddenGrad {
        Matrix<Scalar> weight;
        Vector<Scalar> bias;
        Vector<Scalar> bn_gamma;
        Vector<Scalar> bn_beta;
    };
    std::vector<HiddenGrad> hidden;
    Matrix<Scalar> out_weight;
    Vector<Scalar> out_bias;
};

using Gradients = GradientsT<float>;

enum class TensorRole : std::uint8_t {
    Weight = 0,
    Bias = 1,
    BnGamma = 2,
    BnBeta = 3,
    RunningMean = 4,
    RunningVar = 5,
};

constexpr bool is_trainable(TensorRole role) {
    return role != TensorRole::RunningMean && role != TensorRole::RunningVar;
}

inline const char* tensor_role_name(TensorRole role) {
    switch (role) {
        case TensorRole::Weight: return "weight";
        case TensorRole::Bias: return "bias";
        case TensorRole::BnGamma: return "bn_gamma";
        case TensorRole::BnBeta: return "bn_beta";
        case TensorRole::RunningMean: return "running_mean";
        case TensorRole::RunningVar: return "running_var";
    }
    return "?";
}

struct TensorInfo {
    TensorRole role;
    int layer;  // hidden layer index, or -1 for the output layer
    int rows;
    int cols;  // 0 for vectors
};

/// Visits every tensor of the model in the canonical order used everywhere
/// (aggregation, Adam, Reptile, serialization): hidden layers in order, each
/// as weight, bias, [gamma, beta, running_mean, running_var], then the output
/// weight and bias. fn(TensorInfo, Scalar*, size)
template <typename Scalar, typename Fn>
void visit_params(ModelParamsT<Scalar>& p, Fn&& fn) {
    for (int l = 0; l < static_cast<int>(p.hidden.size()); ++l) {
        auto& h = p.hidden[l];
        fn(TensorInfo{TensorRole::Weight, l, static_cast<int>(h.weight.rows()),
                      static_cast<int>(h.weight.cols())},
           h.weight.data(), static_cast<std::size_t>(h.weight.size()));
        fn(TensorInfo{TensorRole::Bias, l, static_cast<int>(h.bias.size()), 0}, h.bias.data(),
           static_cast<std::size_t>(h.bias.size()));
        if (p.config.use_batchnorm) {
            fn(TensorInfo{TensorRole::BnGamma, l, static_cast<int>(h.bn_gamma.size()), 0},
               h.bn_gamma.data(), static_cast<std::size_t>(h.bn_gamma.size()));
            fn(TensorInfo{TensorRole::BnBeta, l, static_cast<int>(h.bn_beta.size()), 0},
               h.bn_beta.data(), static_cast<std::size_t>(h.bn_beta.size()));
            fn(TensorInfo{TensorRole::RunningMean, l, static_cast<int>(h.running_mean.size()), 0},
               h.running_mean.data(), static_cast<std::size_t>(h.running_mean.size()));
            fn(TensorInfo{TensorRole::RunningVar, l, static_cast<int>(h.running_var.size()), 0},
               h.running_var.data(), static_cast<std::size_t>(h.running_var.size()));
        }
    }
    fn(TensorInfo{TensorRole::Weight, -1, static_cast<int>(p.out_weight.rows()),
                  static_cast<int>(p.out_weight.cols())},
       p.out_weight.data(), static_cast<std::size_t>(p.out_weight.size()));
    fn(TensorInfo{TensorRole::Bias, -1, static_cast<int>(p.out_bias.size()), 0}, p.out_bias.data(),
       static_cast<std::size_t>(p.out_bias.size()));
}

template <typename Scalar, typename Fn>
void visit_params(const ModelParamsT<Scalar>& p, Fn&& fn) {
    visit_params(const_cast<ModelParamsT<Scalar>&>(p),
                 [&fn](const TensorInfo& info, Scalar* data, std::size_t n) {
                     fn(info, static_cast<const Scalar*>(data), n);
                 });
}

template <typename Scalar>
struct TensorRef {
    TensorInfo info;
    Scalar* data;
    std::size_t size;
};

template <typename Scalar>
std::vector<TensorRef<Scalar>> collect_tensors(ModelParamsT<Scalar>& p) {
    std::vector<TensorRef<Scalar>> refs;
    visit_params(p, [&refs](const TensorInfo& info, Scalar* data, std::size_t n) {
        refs.push_back({info, data, n});
    });
    return refs;
}

template <typename Scalar>
std::vector<TensorRef<const Scalar>> collect_tensors(const ModelParamsT<Scalar>& p) {
    std::vector<TensorRef<const Scalar>> refs;
    visit_params(p, [&refs](const TensorInfo& info, const Scalar* data, std::size_t n) {
        refs.push_back({info, data, n});
    });
    return refs;
}

/// Throws unless both parameter sets share layer layout and tensor shapes.
template <typename Scalar>
void check_same_layout(const ModelParamsT<Scalar>& a, const ModelParamsT<Scalar>& b) {
    const auto ta = collect_tensors(a);
    const auto tb = collect_tensors(b);
    if (ta.size() != tb.size()) throw ShapeError("parameter sets have different tensor counts");
    for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i].info.role != tb[i].info.role || ta[i].info.layer != tb[i].info.layer ||
            ta[i].size != tb[i].size)
            throw ShapeError("parameter sets have mismatched tensor shapes");
    }
}

/// Visits param/gradient tensor pairs in trainable order.
/// fn(TensorInfo, Scalar* param, const Scalar* grad, size)
template <typename Scalar, typename Fn>
void zip_trainables(ModelParamsT<Scalar>& p, const GradientsT<Scalar>& g, Fn&& fn) {
    if (g.hidden.size() != p.hidden.size())
        throw ShapeError("gradients do not match parameter layer count");
    for (int l = 0; l < static_cast<int>(p.hidden.size()); ++l) {
        auto& h = p.hidden[l];
        const auto& gh = g.hidden[l];
        if (gh.weight.rows() != h.weight.rows() || gh.weight.cols() != h.weight.cols())
            throw ShapeError("gradient shape mismatch at hidden layer " + std::to_string(l));
        fn(TensorInfo{TensorRole::Weight, l, 0, 0}, h.weight.data(), gh.weight.data(),
           static_cast<std::size_t>(h.weight.size()));
        fn(TensorInfo{TensorRole::Bias, l, 0, 0}, h.bias.data(), gh.bias.data(),
           static_cast<std::size_t>(h.bias.size()));
        if (p.config.use_batchnorm) {
            fn(TensorInfo{TensorRole::BnGamma, l, 0, 0}, h.bn_gamma.data(), gh.bn_gamma.data(),
               static_cast<std::size_t>(h.bn_gamma.size()));
            fn(TensorInfo{TensorRole::BnBeta, l, 0, 0}, h.bn_beta.data(), gh.bn_beta.data(),
               static_cast<std::size_t>(h.bn_beta.size()));
        }
    }
    if (g.out_weight.rows() != p.out_weight.rows() || g.out_weight.cols() != p.out_weight.cols())
        throw ShapeError("gradient shape mismatch at output layer");
    fn(TensorInfo{TensorRole::Weight, -1, 0, 0}, p.out_weight.data(), g.out_weight.data(),
       static_cast<std::size_t>(p.out_weight.size()));
    fn(TensorInfo{TensorRole::Bias, -1, 0, 0}, p.out_bias.data(), g.out_bias.data(),
       static_cast<std::size_t>(p.out_bias.size()));
}

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weight/bias init, BN at identity.
template <typename Scalar>
ModelParamsT<Scalar> init_params(const NetworkConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    GaussianSampler rng(seed);
    auto uniform_pm = [&rng](double bound) {
        return static_cast<Scalar>((2.0 * rng.uniform01() - 1.0) * bound);
    };
    ModelParamsT<Scalar> p;
    p.config = cfg;
    p.hidden.resize(cfg.hidden_layers);
    int fan_in = cfg.in_channels;
    for (auto& h : p.hidden) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        h.weight.resize(cfg.hidden_channels, fan_in);
        for (Eigen::Index i = 0; i < h.weight.size(); ++i) h.weight.data()[i] = uniform_pm(bound);
        h.bias.resize(cfg.hidden_channels);
        for (Eigen::Index i = 0; i < h.bias.size(); ++i) h.bias[i] = uniform_pm(bound);
        if (cfg.use_batchnorm) {
            h.bn_gamma = Vector<Scalar>::Ones(cfg.hidden_channels);
            h.bn_beta = Vector<Scalar>::Zero(cfg.hidden_channels);
            h.running_mean = Vector<Scalar>::Zero(cfg.hidden_channels);
            h.running_var = Vector<Scalar>::Ones(cfg.hidden_channels);
        }
        fan_in = cfg.hidden_channels;
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    p.out_weight.resize(cfg.out_channels, fan_in);
    for (Eigen::Index i = 0; i < p.out_weight.size(); ++i)
        p.out_weight.data()[i] = uniform_pm(bound);
    p.out_bias.resize(cfg.out_channels);
    for (Eigen::Index i = 0; i < p.out_bias.size(); ++i) p.out_bias[i] = uniform_pm(bound);
    return p;
}

template <typename Scalar>
GradientsT<Scalar> make_zero_gradients(const ModelParamsT<Scalar>& p) {
    GradientsT<Scalar> g;
    g.hidden.resize(p.hidden.size());
    for (std::size_t l = 0; l < p.hidden.size(); ++l) {
        g.hidden[l].weight =
            Matrix<Scalar>::Zero(p.hidden[l].weight.rows(), p.hidden[l].weight.cols());
        g.hidden[l].bias = Vector<Scalar>::Zero(p.hidden[l].bias.size());
        if (p.config.use_batchnorm) {
            g.hidden[l].bn_gamma = Vector<Scalar>::Zero(p.hidden[l].bn_gamma.size());
            g.hidden[l].bn_beta = Vector<Scalar>::Zero(p.hidden[l].bn_beta.size());
        }
    }
    g.out_weight = Matrix<Scalar>::Zero(p.out_weight.rows(), p.out_weight.cols());
    g.out_bias = Vector<Scalar>::Zero(p.out_bias.size());
    return g;
}

enum class ForwardMode { Train, Eval };

/// Per-layer values cached by the training forward pass and reused by the
/// backward pass.
template <typename Scalar>
struct ForwardCacheT {
    std::vector<Matrix<Scalar>> activations;  // post-ReLU output of each hidden layer
    std::vector<Matrix<Scalar>> normalized;   // BN z-hat (batchnorm) or preactivation (no BN)
    std::vector<Vector<Scalar>> inv_std;      // 1/sqrt(var + eps) per BN layer
    Matrix<Scalar> predictions;
};

namespace detail {

constexpr double kBnEps = 1e-5;
constexpr double kBnMomentum = 0.1;

// Shared forward walk. `cache` may be null. `stats_target` non-null means
// train-mode running statistics get updated in that parameter set.
template <typename Scalar>
Matrix<Scalar> forward_impl(const ModelParamsT<Scalar>& params, const Matrix<Scalar>& features,
                            ForwardMode mode, ForwardCacheT<Scalar>* cache,
                            ModelParamsT<Scalar>* stats_target) {
    const auto& cfg = params.config;
    cfg.validate();
    const Eigen::Index n = features.rows();
    if (n == 0) throw ValidationError("forward: empty batch");
    if (features.cols() != cfg.in_channels)
        throw ShapeError("forward: features have " + std::to_string(features.cols()) +
                         " columns, network expects " + std::to_string(cfg.in_channels));
    if (static_cast<int>(params.hidden.size()) != cfg.hidden_layers)
        throw ShapeError("forward: parameter layer count does not match config");

    if (cache) {
        cache->activations.assign(params.hidden.size(), {});
        cache->normalized.assign(params.hidden.size(), {});
        cache->inv_std.assign(params.hidden.size(), {});
    }

    const Scalar eps = static_cast<Scalar>(kBnEps);
    const Scalar momentum = static_cast<Scalar>(kBnMomentum);
    Matrix<Scalar> act = features;
    for (std::size_t l = 0; l < params.hidden.size(); ++l) {
        const auto& h = params.hidden[l];
        Matrix<Scalar> z(n, h.weight.rows());
        z.noalias() = act * h.weight.transpose();
        z.rowwise() += h.bias.transpose();

        if (cfg.use_batchnorm) {
            Vector<Scalar> mean, var;
            if (mode == ForwardMode::Train) {
                mean = z.colwise().mean().transpose();
                var = (z.rowwise() - mean.transpose())
                          .array()
                          .square()
                          .colwise()
                          .mean()
                          .matrix()
                          .transpose();
                if (stats_target) {
                    auto& sh = stats_target->hidden[l];
                    // Running variance tracks the unbiased estimate, as is
                    // conventional; normalization uses the biased one.
                    Vector<Scalar> var_unbiased =
                        n > 1 ? Vector<Scalar>(var * (static_cast<Scalar>(n) /
                                                      static_cast<Scalar>(n - 1)))
                              : var;
                    sh.running_mean = (Scalar(1) - momentum) * sh.running_mean + momentum * mean;
                    sh.running_var =
                        (Scalar(1) - momentum) * sh.running_var + momentum * var_unbiased;
                }
            } else {
                if (h.running_mean.size() != h.weight.rows())
                    throw ShapeError("forward: eval mode requires running statistics");
                mean = h.running_mean;
                var = h.running_var;
            }
            Vector<Scalar> inv_std = (var.array() + eps).rsqrt().matrix();
            Matrix<Scalar> zhat = (z.rowwise() - mean.transpose()) * inv_std.asDiagonal();
            if (cache) {
                cache->normalized[l] = zhat;
                cache->inv_std[l] = inv_std;
            }
            z.noalias() = zhat * h.bn_gamma.asDiagonal();
            z.rowwise() += h.bn_beta.transpose();
        } else if (cache) {
            cache->normalized[l] = z;
        }

        act = z.cwiseMax(Scalar(0));
        if (cache) cache->activations[l] = act;
    }

    Matrix<Scalar> pred(n, cfg.out_channels);
    pred.noalias() = act * params.out_weight.transpose();
    pred.rowwise() += params.out_bias.transpose();
    if (!pred.allFinite())
        throw NumericError("forward: non-finite activations reached the output layer");
    if (cache) cache->predictions = pred;
    return pred;
}

}  // namespace detail

/// Train mode uses batch statistics and updates running statistics in-place;
/// eval mode uses running statistics and leaves params untouched.
template <typename Scalar>
Matrix<Scalar> forward(ModelParamsT<Scalar>& params, const Matrix<Scalar>& features,
                       ForwardMode mode) {
    return detail::forward_impl(params, features, mode,
                                static_cast<ForwardCacheT<Scalar>*>(nullptr),
                                mode == ForwardMode::Train ? &params : nullptr);
}

/// Eval-mode forward; pure function of (params, features).
template <typename Scalar>
Matrix<Scalar> forward(const ModelParamsT<Scalar>& params, const Matrix<Scalar>& features) {
    return detail::forward_impl(params, features, ForwardMode::Eval,
                                static_cast<ForwardCacheT<Scalar>*>(nullptr), nullptr);
}

/// Train-mode statistics without mutating running statistics: the exact
/// function the analytic gradients differentiate.
template <typename Scalar>
Matrix<Scalar> forward_batchstats(const ModelParamsT<Scalar>& params,
                                  const Matrix<Scalar>& features) {
    return detail::forward_impl(params, features, ForwardMode::Train,
                                static_cast<ForwardCacheT<Scalar>*>(nullptr), nullptr);
}

/// Training forward that fills `cache` for the backward pass and updates
/// running statistics.
template <typename Scalar>
Matrix<Scalar> forward_train(ModelParamsT<Scalar>& params, const Matrix<Scalar>& features,
                             ForwardCacheT<Scalar>& cache) {
    return detail::forward_impl(params, features, ForwardMode::Train, &cache, &params);
}

template <typename Scalar>
Scalar mse_loss(const Matrix<Scalar>& pred, const Matrix<Scalar>& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw ShapeError("mse_loss: shape mismatch " + std::to_string(pred.rows()) + "x" +
                         std::to_string(pred.cols()) + " vs " + std::to_string(target.rows()) +
                         "x" + std::to_string(target.cols()));
    return (pred - target).array().square().mean();
}

/// Coordinates plus per-cell target values, both normalized to [0,1].
template <typename Scalar>
struct TrainBatchT {
    Matrix<Scalar> coords;   // N x 2, global-frame normalized
    Matrix<Scalar> targets;  // N x out_channels

    void validate() const {
        if (coords.rows() == 0) throw ValidationError("TrainBatch: empty batch");
        if (coords.rows() != targets.rows())
            throw ShapeError("TrainBatch: coords/targets row mismatch");
        if (!coords.allFinite() || !targets.allFinite())
            throw ValidationError("TrainBatch: non-finite values");
        if (coords.minCoeff() < Scalar(0) || coords.maxCoeff() > Scalar(1))
            throw ValidationError("TrainBatch: coords outside [0,1]");
        if (targets.minCoeff() < Scalar(0) || targets.maxCoeff() > Scalar(1))
            throw ValidationError("TrainBatch: targets outside [0,1]");
    }
};

using TrainBatch = TrainBatchT<float>;

namespace detail {

template <typename Scalar, typename Derived>
void check_grad_finite(const Eigen::MatrixBase<Derived>& g, TensorRole role, int layer) {
    if (g.allFinite()) return;
    const std::string where =
        layer < 0 ? "output layer" : "hidden layer " + std::to_string(layer);
    throw NumericError(std::string("backward: non-finite gradient for ") +
                       tensor_role_name(role) + " of " + where);
}

// Backprop of d(mse)/d(theta) given a filled training cache.
template <typename Scalar>
GradientsT<Scalar> backward_from_cache(const ModelParamsT<Scalar>& params,
                                       const Matrix<Scalar>& features,
                                       const Matrix<Scalar>& targets,
                                       const ForwardCacheT<Scalar>& cache) {
    const auto& cfg = params.config;
    const Eigen::Index n = features.rows();
    GradientsT<Scalar> g;
    g.hidden.resize(params.hidden.size());

    // dL/dpred for the mean over all N*C elements.
    Matrix<Scalar> delta = (cache.predictions - targets) *
                           (Scalar(2) / static_cast<Scalar>(n * cfg.out_channels));

    const Matrix<Scalar>& last_act = params.hidden.empty() ? features : cache.activations.back();
    g.out_weight.noalias() = delta.transpose() * last_act;
    g.out_bias = delta.colwise().sum().transpose();
    check_grad_finite<Scalar>(g.out_weight, TensorRole::Weight, -1);
    check_grad_finite<Scalar>(g.out_bias, TensorRole::Bias, -1);

    Matrix<Scalar> dact;
    if (!params.hidden.empty()) dact.noalias() = delta * params.out_weight;

    for (int l = static_cast<int>(params.hidden.size()) - 1; l >= 0; --l) {
        const auto& h = params.hidden[l];
        const Matrix<Scalar>& act = cache.activations[l];
        // ReLU mask: post-activation > 0 iff preactivation > 0.
        Matrix<Scalar> dy =
            dact.cwiseProduct((act.array() > Scalar(0)).template cast<Scalar>().matrix());

        Matrix<Scalar> dz;
        if (cfg.use_batchnorm) {
            const Matrix<Scalar>& zhat = cache.normalized[l];
            const Vector<Scalar>& inv_std = cache.inv_std[l];
            g.hidden[l].bn_gamma = (dy.array() * zhat.array()).colwise().sum().matrix().transpose();
            g.hidden[l].bn_beta = dy.colwise().sum().transpose();
            check_grad_finite<Scalar>(g.hidden[l].bn_gamma, TensorRole::BnGamma, l);
            Matrix<Scalar> dzhat = dy * h.bn_gamma.asDiagonal();
            // Batch statistics depend on z, so the full BN backward applies:
            // dz = inv_std .* (dzhat - mean(dzhat) - zhat .* mean(dzhat .* zhat))
            Vector<Scalar> mean_dzhat = dzhat.colwise().mean().transpose();
            Vector<Scalar> mean_dzhat_zhat =
                (dzhat.array() * zhat.array()).colwise().mean().matrix().transpose();
            dz = ((dzhat.rowwise() - mean_dzhat.transpose()) -
                  zhat * mean_dzhat_zhat.asDiagonal()) *
                 inv_std.asDiagonal();
        } else {
            dz = std::move(dy);
        }

        const Matrix<Scalar>& prev_act = l == 0 ? features : cache.activations[l - 1];
        g.hidden[l].weight.noalias() = dz.transpose() * prev_act;
        g.hidden[l].bias = dz.colwise().sum().transpose();
        check_grad_finite<Scalar>(g.hidden[l].weight, TensorRole::Weight, l);
        check_grad_finite<Scalar>(g.hidden[l].bias, TensorRole::Bias, l);
        if (l > 0) dact.noalias() = dz * h.weight;
    }
    return g;
}

}  // namespace detail

/// Gradients of mse_loss(forward(features), targets) w.r.t. every trainable
/// tensor, using train-mode (batch) statistics. Running statistics are not
/// touched. Optionally reports the loss.
template <typename Scalar>
GradientsT<Scalar> backward_features(const ModelParamsT<Scalar>& params,
                                     const Matrix<Scalar>& features, const Matrix<Scalar>& targets,
                                     Scalar* loss_out = nullptr) {
    if (targets.cols() != params.config.out_channels)
        throw ShapeError("backward: target columns do not match out_channels");
    ForwardCacheT<Scalar> cache;
    detail::forward_impl(params, features, ForwardMode::Train, &cache, nullptr);
    if (loss_out) *loss_out = mse_loss<Scalar>(cache.predictions, targets);
    return detail::backward_from_cache(params, features, targets, cache);
}

/// Spec-level backward: encodes the batch coordinates, then differentiates
/// the encoded pipeline.
template <typename Scalar>
GradientsT<Scalar> backward(const ModelParamsT<Scalar>& params, const TrainBatchT<Scalar>& batch,
                            const FourierEncoderT<Scalar>& encoder, Scalar* loss_out = nullptr) {
    batch.validate();
    return backward_features(params, encoder.encode(batch.coords), batch.targets, loss_out);
}

}  // namespace fedmap

#pragma once

#include "fedmap/model.hpp"

#include <cmath>
#include <vector>

namespace fedmap {

/// First/second moment state, one flat vector per trainable tensor in
/// visitation order.
template <typename Scalar>
struct AdamStateT {
    std::vector<Vector<Scalar>> m;
    std::vector<Vector<Scalar>> v;
    std::int64_t step = 0;
    Scalar beta1 = static_cast<Scalar>(0.9);
    Scalar beta2 = static_cast<Scalar>(0.999);
    Scalar epsilon = static_cast<Scalar>(1e-8);
};

using AdamState = AdamStateT<float>;

template <typename Scalar>
AdamStateT<Scalar> make_adam_state(const ModelParamsT<Scalar>& params) {
    AdamStateT<Scalar> state;
    visit_params(params, [&state](const TensorInfo& info, const Scalar*, std::size_t n) {
        if (!is_trainable(info.role)) return;
        state.m.push_back(Vector<Scalar>::Zero(static_cast<Eigen::Index>(n)));
        state.v.push_back(Vector<Scalar>::Zero(static_cast<Eigen::Index>(n)));
    });
    return state;
}

/// One ADAM update with bias correction. Only trainables move; BatchNorm
/// running statistics are untouched.
template <typename Scalar>
void adam_step(ModelParamsT<Scalar>& params, const GradientsT<Scalar>& grads,
               AdamStateT<Scalar>& state, Scalar lr) {
    if (!(lr > Scalar(0))) throw ValidationError("adam_step: lr must be > 0");
    state.step += 1;
    const Scalar b1 = state.beta1;
    const Scalar b2 = state.beta2;
    const Scalar corr1 = Scalar(1) - std::pow(b1, static_cast<Scalar>(state.step));
    const Scalar corr2 = Scalar(1) - std::pow(b2, static_cast<Scalar>(state.step));
    std::size_t t = 0;
    zip_trainables(params, grads,
                   [&](const TensorInfo& info, Scalar* p, const Scalar* g, std::size_t n) {
                       if (t >= state.m.size())
                           throw ShapeError("adam_step: state does not match parameters");
                       auto& m = state.m[t];
                       auto& v = state.v[t];
                       if (static_cast<std::size_t>(m.size()) != n)
                           throw ShapeError("adam_step: moment size mismatch");
                       Eigen::Map<const Vector<Scalar>> grad(g, static_cast<Eigen::Index>(n));
                       if (!grad.allFinite())
                           throw NumericError(
                               std::string("adam_step: non-finite gradient for ") +
                               tensor_role_name(info.role) +
                               (info.layer < 0 ? std::string(" of output layer")
                                               : " of hidden layer " + std::to_string(info.layer)));
                       Eigen::Map<Vector<Scalar>> param(p, static_cast<Eigen::Index>(n));
                       m = b1 * m + (Scalar(1) - b1) * grad;
                       v = b2 * v + (Scalar(1) - b2) * grad.cwiseProduct(grad);
                       param.array() -= lr * (m.array() / corr1) /
                                        ((v.array() / corr2).sqrt() + state.epsilon);
                       ++t;
                   });
}

/// Server-side adaptive aggregation hyperparameters (FedAdam / FedYogi).
struct ServerOpts {
    double eta = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.99;
    double tau = 1e-3;
};

/// Shared moment update for FedAdam/FedYogi over one flat span. delta is the
/// averaged client delta; global moves by eta * m / (sqrt(v) + tau). No bias
/// correction is applied.
template <typename Scalar>
void adaptive_server_update(Scalar* global, const Scalar* delta, Scalar* m, Scalar* v,
                            std::size_t n, const ServerOpts& opts, bool yogi) {
    const Scalar b1 = static_cast<Scalar>(opts.beta1);
    const Scalar b2 = static_cast<Scalar>(opts.beta2);
    const Scalar eta = static_cast<Scalar>(opts.eta);
    const Scalar tau = static_cast<Scalar>(opts.tau);
    for (std::size_t i = 0; i < n; ++i) {
        const Scalar d = delta[i];
        const Scalar d2 = d * d;
        m[i] = b1 * m[i] + (Scalar(1) - b1) * d;
        if (yogi) {
            const Scalar diff = v[i] - d2;
            const Scalar sign = diff > Scalar(0) ? Scalar(1) : (diff < Scalar(0) ? Scalar(-1) : Scalar(0));
            v[i] = v[i] - (Scalar(1) - b2) * d2 * sign;
        } else {
            v[i] = b2 * v[i] + (Scalar(1) - b2) * d2;
        }
        global[i] += eta * m[i] / (std::sqrt(v[i]) + tau);
    }
}

}  // namespace fedmap

#pragma once

#include <vector>

#include "tip/errors.hpp"
#include "tip/matrix.hpp"
#include "tip/rng.hpp"
#include "tip/scalar.hpp"

namespace tip {

enum class Activation { linear, relu, tanh_act, softplus_act };

template <class S>
S apply_activation(const S& x, Activation act) {
    using std::tanh;
    switch (act) {
        case Activation::linear: return x;
        case Activation::relu: return smax(x, 0.0);
        case Activation::tanh_act: return tanh(x);
        case Activation::softplus_act: return softplus(x);
    }
    throw param_error("apply_activation: unknown activation");
}

// Row-wise affine map with activation: act(X W + b).
template <class S>
struct LinearLayerT {
    Mat<S> w;
    std::vector<S> b;
    Activation act = Activation::linear;
};

using LinearLayer = LinearLayerT<double>;

template <class S>
Mat<S> linear_forward(const Mat<S>& x, const LinearLayerT<S>& layer) {
    if (x.cols() != layer.w.rows()) throw param_error("linear_forward: shape mismatch");
    if (layer.b.size() != layer.w.cols()) throw param_error("linear_forward: bias size mismatch");
    return Mat<S>::from_fn(x.rows(), layer.w.cols(), [&](std::size_t i, std::size_t j) {
        S acc = layer.b[j];
        for (std::size_t k = 0; k < x.cols(); ++k) acc = acc + x(i, k) * layer.w(k, j);
        return apply_activation(acc, layer.act);
    });
}

// Glorot-style uniform init in [-a, a] with a = sqrt(6 / (fan_in + fan_out)).
inline LinearLayer init_linear(int in_dim, int out_dim, Activation act, Rng& rng) {
    if (in_dim < 1 || out_dim < 1) throw param_error("init_linear: dimensions must be positive");
    double a = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    LinearLayer layer;
    layer.w = Mat<double>::from_fn(static_cast<std::size_t>(in_dim), static_cast<std::size_t>(out_dim),
                                   [&](std::size_t, std::size_t) { return rng.uniform(-a, a); });
    layer.b.assign(static_cast<std::size_t>(out_dim), 0.0);
    layer.act = act;
    return layer;
}

} // namespace tip

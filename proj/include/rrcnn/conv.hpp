#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace rrcnn {

template <class Scalar>
using VecX = Eigen::Vector<Scalar, Eigen::Dynamic>;

// "Same" 1-D convolution with zero padding:
//
//   y[t] = sum_j x[t - K/2 + j] * w[j],   x[.] = 0 outside [0, N)
//
// K must be odd so the output stays aligned with the input grid.
template <class Scalar>
VecX<Scalar> conv1d_same(const VecX<Scalar>& x, const VecX<Scalar>& w) {
    const Eigen::Index n = x.size();
    const Eigen::Index k = w.size();
    if (k % 2 == 0) throw std::invalid_argument("conv1d_same: filter length must be odd");
    if (k > n)
        throw std::invalid_argument("conv1d_same: filter length " + std::to_string(k) +
                                    " exceeds signal length " + std::to_string(n));
    const Eigen::Index c = k / 2;
    VecX<Scalar> y(n);
    // left edge: x index t - c + j >= 0  =>  j >= c - t
    for (Eigen::Index t = 0; t < c; ++t) {
        const Eigen::Index j0 = c - t;
        y[t] = w.tail(k - j0).dot(x.head(k - j0));
    }
    // interior, fully inside
    for (Eigen::Index t = c; t < n - c; ++t)
        y[t] = w.dot(x.segment(t - c, k));
    // right edge: t - c + j <= n - 1  =>  j <= n - 1 - t + c
    for (Eigen::Index t = std::max<Eigen::Index>(c, n - c); t < n; ++t) {
        const Eigen::Index jn = n - t + c; // number of valid taps
        y[t] = w.head(jn).dot(x.segment(t - c, jn));
    }
    return y;
}

// Adjoint of conv1d_same with respect to the input: given gy = dL/dy,
// returns dL/dx. Equals conv1d_same(gy, reverse(w)) for odd K.
template <class Scalar>
VecX<Scalar> conv1d_same_input_grad(const VecX<Scalar>& gy, const VecX<Scalar>& w) {
    VecX<Scalar> wr = w.reverse();
    return conv1d_same<Scalar>(gy, wr);
}

// Adjoint with respect to the filter: gw[j] = sum_t gy[t] * x[t - K/2 + j].
template <class Scalar>
VecX<Scalar> conv1d_same_weight_grad(const VecX<Scalar>& x, const VecX<Scalar>& gy,
                                     Eigen::Index k) {
    const Eigen::Index n = x.size();
    if (k % 2 == 0) throw std::invalid_argument("conv1d_same_weight_grad: K must be odd");
    if (k > n) throw std::invalid_argument("conv1d_same_weight_grad: K exceeds N");
    const Eigen::Index c = k / 2;
    VecX<Scalar> gw(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        // valid t range: 0 <= t - c + j < n
        const Eigen::Index t0 = std::max<Eigen::Index>(0, c - j);
        const Eigen::Index t1 = std::min<Eigen::Index>(n, n + c - j);
        gw[j] = gy.segment(t0, t1 - t0).dot(x.segment(t0 - c + j, t1 - t0));
    }
    return gw;
}

} // namespace rrcnn

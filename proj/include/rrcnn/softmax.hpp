#pragma once

#include <Eigen/Core>

#include <stdexcept>

#include "rrcnn/conv.hpp"

namespace rrcnn {

// Numerically stable softmax (max-subtracted). Output is strictly positive
// and sums to 1; invariant under a constant shift of the input.
template <class Scalar>
VecX<Scalar> softmax(const VecX<Scalar>& v) {
    if (v.size() == 0) throw std::invalid_argument("softmax: empty input");
    if (!v.allFinite()) throw std::invalid_argument("softmax: non-finite input");
    VecX<Scalar> e = (v.array() - v.maxCoeff()).exp();
    return e / e.sum();
}

// Jacobian-vector product: given s = softmax(v) and gs = dL/ds, returns
// dL/dv = s .* (gs - <gs, s>).
template <class Scalar>
VecX<Scalar> softmax_backward(const VecX<Scalar>& s, const VecX<Scalar>& gs) {
    const Scalar dot = gs.dot(s);
    return (s.array() * (gs.array() - dot)).matrix();
}

} // namespace rrcnn

#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

#include "rrcnn/conv.hpp"

namespace rrcnn {

// Natural cubic spline through strictly increasing knots (second derivative
// zero at both end knots). Interpolant is evaluated from the per-segment
// second derivatives; queries outside the knot range use the end segments.
template <class Scalar>
class NaturalCubicSpline {
public:
    NaturalCubicSpline(std::vector<Scalar> ts, std::vector<Scalar> ys)
        : t_(std::move(ts)), y_(std::move(ys)) {
        const size_t n = t_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("spline: need >= 2 knots with matching values");
        for (size_t i = 0; i + 1 < n; ++i)
            if (!(t_[i + 1] > t_[i]))
                throw std::invalid_argument("spline: knots must strictly increase");
        m_.assign(n, Scalar(0));
        if (n == 2) return;

        // Thomas solve of the tridiagonal system for interior second derivatives.
        const size_t k = n - 2;
        std::vector<Scalar> diag(k), upper(k), rhs(k);
        for (size_t i = 0; i < k; ++i) {
            const Scalar h0 = t_[i + 1] - t_[i];
            const Scalar h1 = t_[i + 2] - t_[i + 1];
            diag[i] = Scalar(2) * (h0 + h1);
            upper[i] = h1;
            rhs[i] = Scalar(6) * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
        }
        for (size_t i = 1; i < k; ++i) {
            const Scalar lower = t_[i + 1] - t_[i]; // h_i, subdiagonal entry
            const Scalar w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_[k] = rhs[k - 1] / diag[k - 1];
        for (size_t i = k - 1; i-- > 0;) m_[i + 1] = (rhs[i] - upper[i] * m_[i + 2]) / diag[i];
    }

    Scalar eval(Scalar t) const {
        const size_t i = segment(t);
        const Scalar h = t_[i + 1] - t_[i];
        const Scalar a = (t_[i + 1] - t) / h;
        const Scalar b = (t - t_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / Scalar(6);
    }

    Scalar eval_second(Scalar t) const {
        const size_t i = segment(t);
        const Scalar h = t_[i + 1] - t_[i];
        const Scalar a = (t_[i + 1] - t) / h;
        const Scalar b = (t - t_[i]) / h;
        return a * m_[i] + b * m_[i + 1];
    }

    const std::vector<Scalar>& knots() const { return t_; }
    const std::vector<Scalar>& curvatures() const { return m_; }

private:
    size_t segment(Scalar t) const {
        size_t lo = 0, hi = t_.size() - 1;
        if (t <= t_.front()) return 0;
        if (t >= t_.back()) return t_.size() - 2;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            (t_[mid] <= t ? lo : hi) = mid;
        }
        return lo;
    }

    std::vector<Scalar> t_, y_, m_;
};

} // namespace rrcnn

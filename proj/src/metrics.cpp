#include "rrcnn/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace rrcnn {

double mae(const Vec& pred, const Vec& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("mae: length mismatch " + std::to_string(pred.size()) +
                                    " vs " + std::to_string(truth.size()));
    return (pred - truth).cwiseAbs().mean();
}

double rmse(const Vec& pred, const Vec& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("rmse: length mismatch " + std::to_string(pred.size()) +
                                    " vs " + std::to_string(truth.size()));
    return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

double rho(const Vec& c1, const Vec& c2) {
    if (c1.size() != c2.size()) throw std::invalid_argument("rho: length mismatch");
    const double n1 = c1.norm(), n2 = c2.norm();
    if (n1 == 0.0 || n2 == 0.0) throw std::invalid_argument("rho: zero-norm input");
    return std::abs(c1.dot(c2)) / (n1 * n2);
}

} // namespace rrcnn

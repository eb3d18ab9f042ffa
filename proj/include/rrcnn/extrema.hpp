#pragma once

#include <vector>

#include "rrcnn/signal.hpp"

namespace rrcnn {

struct ExtremaIndices {
    std::vector<Eigen::Index> maxima;
    std::vector<Eigen::Index> minima;
    size_t count() const { return maxima.size() + minima.size(); }
};

// Strict interior extrema by sign change of the first difference. A plateau
// flanked by opposite-sign differences reports its midpoint index (rounded
// down). Endpoints are never reported.
inline ExtremaIndices find_extrema(const Vec& x) {
    ExtremaIndices out;
    const Eigen::Index n = x.size();
    if (n < 3) return out;

    Eigen::Index last_change = 0; // start of the current plateau (or the last strict move)
    int prev_sign = 0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double d = x[i + 1] - x[i];
        const int sign = (d > 0.0) - (d < 0.0);
        if (sign == 0) continue;
        if (prev_sign != 0 && sign != prev_sign) {
            // extremum spans [last_change+? ...]; the flat run is
            // [plateau_start, i] where plateau_start is the sample after the
            // previous nonzero difference
            const Eigen::Index lo = last_change;
            const Eigen::Index hi = i;
            const Eigen::Index mid = (lo + hi) / 2;
            if (prev_sign > 0)
                out.maxima.push_back(mid);
            else
                out.minima.push_back(mid);
        }
        prev_sign = sign;
        last_change = i + 1;
    }
    return out;
}

inline ExtremaIndices find_extrema(const Signal& x) { return find_extrema(x.samples); }

} // namespace rrcnn

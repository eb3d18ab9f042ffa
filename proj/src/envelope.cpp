#include "rrcnn/envelope.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rrcnn/cubic_spline.hpp"
#include "rrcnn/extrema.hpp"

namespace rrcnn {

namespace {

Vec envelope_through(const Signal& x, const std::vector<Eigen::Index>& idx) {
    const Eigen::Index n = x.size();
    const double t_lo = x.time(0);
    const double t_hi = x.time(n - 1);
    std::vector<double> ts, ys;
    // mirror up to two interior knots past each end
    std::vector<std::pair<double, double>> pre, post;
    for (auto i : idx) {
        if (i > 0 && pre.size() < 2) pre.emplace_back(2.0 * t_lo - x.time(i), x.samples[i]);
        if (i < n - 1) {
            post.emplace_back(2.0 * t_hi - x.time(i), x.samples[i]);
            if (post.size() > 2) post.erase(post.begin());
        }
    }
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        ts.push_back(it->first);
        ys.push_back(it->second);
    }
    for (auto i : idx) {
        ts.push_back(x.time(i));
        ys.push_back(x.samples[i]);
    }
    std::sort(post.begin(), post.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [t, y] : post) {
        ts.push_back(t);
        ys.push_back(y);
    }
    NaturalCubicSpline<double> sp(std::move(ts), std::move(ys));
    Vec env(n);
    for (Eigen::Index k = 0; k < n; ++k) env[k] = sp.eval(x.time(k));
    return env;
}

// End samples count as envelope knots when the signal moves away from them
// on the envelope's side; without this the spline has no support where the
// waveform is still incomplete and the average flares badly there.
std::vector<Eigen::Index> with_end_knots(const Signal& x, std::vector<Eigen::Index> idx,
                                         bool maxima) {
    const Eigen::Index n = x.size();
    const bool lo = maxima ? x.samples[0] > x.samples[1] : x.samples[0] < x.samples[1];
    const bool hi =
        maxima ? x.samples[n - 1] > x.samples[n - 2] : x.samples[n - 1] < x.samples[n - 2];
    if (lo) idx.insert(idx.begin(), 0);
    if (hi) idx.push_back(n - 1);
    return idx;
}

} // namespace

Signal csa_average(const Signal& x) {
    x.validate();
    ExtremaIndices ext = find_extrema(x);
    if (ext.maxima.size() < 2 || ext.minima.size() < 2)
        throw std::invalid_argument("csa_average: need at least 2 maxima and 2 minima, got " +
                                    std::to_string(ext.maxima.size()) + "/" +
                                    std::to_string(ext.minima.size()));
    Vec upper = envelope_through(x, with_end_knots(x, ext.maxima, true));
    Vec lower = envelope_through(x, with_end_knots(x, ext.minima, false));
    return with_samples(x, 0.5 * (upper + lower));
}

} // namespace rrcnn

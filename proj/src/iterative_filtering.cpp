#include "rrcnn/iterative_filtering.hpp"

#include <cmath>
#include <stdexcept>

namespace rrcnn {

void IfConfig::validate() const {
    if (!(xi > 0.0)) throw std::invalid_argument("IfConfig: xi must be positive");
    if (!(inner_tol > 0.0 && inner_tol < 1.0))
        throw std::invalid_argument("IfConfig: inner_tol must lie in (0, 1)");
    if (max_inner < 1) throw std::invalid_argument("IfConfig: max_inner must be >= 1");
    if (max_imfs < 1) throw std::invalid_argument("IfConfig: max_imfs must be >= 1");
}

namespace {

// Mirror extension around the end samples: x[-k] = x[k], x[n-1+k] = x[n-1-k].
inline double mirrored(const Vec& x, Eigen::Index i) {
    const Eigen::Index n = x.size();
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
    return x[i];
}

Eigen::Index filter_half_length(const Vec& x, double xi) {
    const size_t n_ext = find_extrema(x).count();
    if (n_ext == 0) return 0;
    const auto n = static_cast<double>(x.size());
    auto l = static_cast<Eigen::Index>(std::llround(xi * n / static_cast<double>(n_ext)));
    return std::clamp<Eigen::Index>(l, 1, x.size() / 2);
}

} // namespace

Vec if_window_weights(Eigen::Index l, IfWindow window) {
    Vec w = Vec::Zero(2 * l + 1);
    if (window == IfWindow::triangular) {
        for (Eigen::Index j = -l; j <= l; ++j)
            w[j + l] = static_cast<double>(l + 1 - std::abs(j));
    } else {
        // smooth bump self-convolved: the transfer function is then a square
        // and never negative, so the sift update 1 - H stays nonexpansive at
        // every frequency (the same reason the triangular window is a
        // uniform window convolved with itself)
        Vec base(l + 1);
        const double c = static_cast<double>(l) / 2.0;
        const double r = static_cast<double>(l) / 2.0 + 1.0;
        for (Eigen::Index j = 0; j <= l; ++j) {
            const double u = (static_cast<double>(j) - c) / r;
            base[j] = std::exp(-1.0 / (1.0 - u * u));
        }
        for (Eigen::Index a = 0; a <= l; ++a)
            for (Eigen::Index b = 0; b <= l; ++b) w[a + b] += base[a] * base[b];
    }
    return w / w.sum();
}

Signal if_local_average(const Signal& x, Eigen::Index l, IfWindow window) {
    const Eigen::Index n = x.size();
    if (l < 1 || l > n / 2)
        throw std::invalid_argument("if_local_average: half-length " + std::to_string(l) +
                                    " outside [1, N/2]");
    const Vec w = if_window_weights(l, window);
    Vec out(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        double acc = 0.0;
        for (Eigen::Index j = -l; j <= l; ++j) acc += w[j + l] * mirrored(x.samples, t + j);
        out[t] = acc;
    }
    return with_samples(x, std::move(out));
}

SiftResult if_extract_imf(const Signal& x, const IfConfig& cfg) {
    cfg.validate();
    x.validate();
    if (find_extrema(x).count() < 2)
        throw std::invalid_argument("if_extract_imf: signal has fewer than 2 extrema");

    Signal cur = x;
    int iter = 0;
    while (iter < cfg.max_inner) {
        const Eigen::Index l = filter_half_length(cur.samples, cfg.xi);
        if (l == 0) break; // lost all extrema mid-sift; outer loop will stop
        Signal avg = if_local_average(cur, l, cfg.window);
        const double step = avg.samples.norm();
        const double ref = cur.samples.norm();
        cur.samples -= avg.samples;
        ++iter;
        if (ref == 0.0 || step / ref < cfg.inner_tol) break;
    }
    return {std::move(cur), iter};
}

DecompositionResult if_decompose(const Signal& x, const IfConfig& cfg) {
    cfg.validate();
    if (x.size() < 8) throw std::invalid_argument("if_decompose: need N >= 8");
    DecompositionResult res;
    Signal remainder = x;
    while (static_cast<int>(res.imfs.size()) < cfg.max_imfs &&
           find_extrema(remainder).count() >= 2) {
        SiftResult s = if_extract_imf(remainder, cfg);
        remainder.samples -= s.imf.samples;
        res.imfs.push_back(std::move(s.imf));
    }
    res.residue = std::move(remainder);
    return res;
}

} // namespace rrcnn

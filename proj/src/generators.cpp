#include "rrcnn/generators.hpp"

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "rrcnn/rng.hpp"

namespace rrcnn {

Signal sample_function(const AnalyticSignal& expr, double t0, double t1, Eigen::Index n) {
    if (!(t1 > t0)) throw std::invalid_argument("sample_function: need t1 > t0");
    if (n < 2) throw std::invalid_argument("sample_function: need N >= 2");
    const double dt = (t1 - t0) / static_cast<double>(n - 1);
    Vec s(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const double v = expr.fn(t);
        if (!std::isfinite(v))
            throw std::runtime_error("sample_function: '" + expr.name +
                                     "' is non-finite at t=" + std::to_string(t));
        s[k] = v;
    }
    return Signal(std::move(s), t0, dt);
}

Signal add_gaussian_noise(const Signal& x, double snr_db, uint64_t seed) {
    const double px = signal_power(x.samples);
    if (px == 0.0)
        throw std::invalid_argument("add_gaussian_noise: zero-power input, SNR undefined");
    const double sigma = std::sqrt(px / std::pow(10.0, snr_db / 10.0));
    Rng rng(seed);
    Signal out = x;
    for (Eigen::Index k = 0; k < out.size(); ++k) out.samples[k] += sigma * rng.normal();
    return out;
}

size_t SampleSet::count_split(Split s) const {
    size_t c = 0;
    for (auto t : split) c += (t == s);
    return c;
}

std::vector<size_t> SampleSet::indices_of(Split s) const {
    std::vector<size_t> idx;
    for (size_t i = 0; i < split.size(); ++i)
        if (split[i] == s) idx.push_back(i);
    return idx;
}

TableId table_id_from_string(const std::string& s) {
    if (s == "T2" || s == "t2") return TableId::T2;
    if (s == "T6" || s == "t6") return TableId::T6;
    if (s == "T8" || s == "t8") return TableId::T8;
    if (s == "T10" || s == "t10") return TableId::T10;
    if (s == "T12" || s == "t12") return TableId::T12;
    throw std::invalid_argument("unknown table id: " + s);
}

std::string to_string(TableId t) {
    switch (t) {
        case TableId::T2: return "T2";
        case TableId::T6: return "T6";
        case TableId::T8: return "T8";
        case TableId::T10: return "T10";
        case TableId::T12: return "T12";
    }
    return "?";
}

namespace {

using Fn = std::function<double(double)>;

struct RowSpec {
    std::string family;
    Fn x1, x2;
    bool product = false; // input = x1*x2 with label x1*x2; otherwise x1+x2 with label x2
    std::map<std::string, double> params;
};

// Average-task grids on [0, 3] (single label). The three families mix
// linear/constant trends with cosine, sine and chirped mono-components.
void emit_avg_rows(std::vector<RowSpec>& rows) {
    // family a: trend 0.1kt or 0, tone cos(3lt) or cos(3klt + t + cos t)
    for (int k = 2; k <= 9; ++k)
        for (int l = 2; l <= 8; l += 2)
            for (int trend = 0; trend < 2; ++trend)
                for (int tone = 0; tone < 2; ++tone) {
                    RowSpec r;
                    r.family = "t2a";
                    const double kk = k, ll = l;
                    r.x1 = trend == 0 ? Fn([kk](double t) { return 0.1 * kk * t; })
                                      : Fn([](double) { return 0.0; });
                    r.x2 = tone == 0
                               ? Fn([ll](double t) { return std::cos(3.0 * ll * t); })
                               : Fn([kk, ll](double t) {
                                     return std::cos(3.0 * kk * ll * t + t + std::cos(t));
                                 });
                    r.params = {{"k", kk}, {"l", ll},
                                {"trend", double(trend)}, {"tone", double(tone)}};
                    rows.push_back(std::move(r));
                }
    // family b: trend 0.1k or 0, tone sin(3klt) or sin(3klt + t^2 + cos t)
    for (int k = 1; k <= 10; ++k)
        for (int l = 2; l <= 28; l += 2)
            for (int trend = 0; trend < 2; ++trend)
                for (int tone = 0; tone < 2; ++tone) {
                    RowSpec r;
                    r.family = "t2b";
                    const double kk = k, ll = l;
                    r.x1 = trend == 0 ? Fn([kk](double) { return 0.1 * kk; })
                                      : Fn([](double) { return 0.0; });
                    r.x2 = tone == 0
                               ? Fn([kk, ll](double t) { return std::sin(3.0 * kk * ll * t); })
                               : Fn([kk, ll](double t) {
                                     return std::sin(3.0 * kk * ll * t + t * t + std::cos(t));
                                 });
                    r.params = {{"k", kk}, {"l", ll},
                                {"trend", double(trend)}, {"tone", double(tone)}};
                    rows.push_back(std::move(r));
                }
    // family c: amplitude (3 + 2cos(0.5kt)) or 1, chirp cos(0.5klt^2) or
    // cos(0.5lt^2 + l cos t); the product itself is the labeled component
    for (int k = 2; k <= 6; ++k)
        for (int l = 4; l <= 9; ++l)
            for (int amp = 0; amp < 2; ++amp)
                for (int tone = 0; tone < 2; ++tone) {
                    RowSpec r;
                    r.family = "t2c";
                    r.product = true;
                    const double kk = k, ll = l;
                    r.x1 = amp == 0
                               ? Fn([kk](double t) { return 3.0 + 2.0 * std::cos(0.5 * kk * t); })
                               : Fn([](double) { return 1.0; });
                    r.x2 = tone == 0
                               ? Fn([kk, ll](double t) { return std::cos(0.5 * kk * ll * t * t); })
                               : Fn([ll](double t) {
                                     return std::cos(0.5 * ll * t * t + ll * std::cos(t));
                                 });
                    r.params = {{"k", kk}, {"l", ll},
                                {"amp", double(amp)}, {"tone", double(tone)}};
                    rows.push_back(std::move(r));
                }
}

// Two-component grids on [0, 6]; labels are [x2, x1] (faster tone first).
void emit_decomp_rows(std::vector<RowSpec>& rows) {
    const double pi = 3.14159265358979323846;
    // close frequencies: k*pi vs (k+1.5)*pi
    for (int k = 5; k <= 14; ++k)
        for (int lowz = 0; lowz < 2; ++lowz)
            for (int tone = 0; tone < 2; ++tone) {
                RowSpec r;
                r.family = "t8a";
                const double kk = k;
                r.x1 = lowz == 0 ? Fn([kk, pi](double t) { return std::cos(kk * pi * t); })
                                 : Fn([](double) { return 0.0; });
                r.x2 = tone == 0
                           ? Fn([kk, pi](double t) { return std::cos((kk + 1.5) * pi * t); })
                           : Fn([kk, pi](double t) {
                                 return std::cos((kk + 1.5) * pi * t + t * t + std::cos(t));
                             });
                r.params = {{"k", kk}, {"lowz", double(lowz)}, {"tone", double(tone)}};
                rows.push_back(std::move(r));
            }
    // harmonic ratios: k*pi vs k*l*pi
    for (int k = 5; k <= 14; ++k)
        for (int l = 2; l <= 19; ++l)
            for (int lowz = 0; lowz < 2; ++lowz)
                for (int tone = 0; tone < 2; ++tone) {
                    RowSpec r;
                    r.family = "t8b";
                    const double kk = k, ll = l;
                    r.x1 = lowz == 0 ? Fn([kk, pi](double t) { return std::cos(kk * pi * t); })
                                     : Fn([](double) { return 0.0; });
                    r.x2 = tone == 0
                               ? Fn([kk, ll, pi](double t) { return std::cos(kk * ll * pi * t); })
                               : Fn([kk, ll, pi](double t) {
                                     return std::cos(kk * ll * pi * t + t * t + std::cos(t));
                                 });
                    r.params = {{"k", kk}, {"l", ll},
                                {"lowz", double(lowz)}, {"tone", double(tone)}};
                    rows.push_back(std::move(r));
                }
}

// Orthogonal Fourier pairs on [0, 2*pi]; labels are [sin((k+l)t), cos(kt)].
void emit_ortho_rows(std::vector<RowSpec>& rows) {
    for (int k = 6; k <= 9; ++k)
        for (int l = 3; l <= 33; l += 2) {
            RowSpec r;
            r.family = "t12";
            const double kk = k, ll = l;
            r.x1 = Fn([kk](double t) { return std::cos(kk * t); });
            r.x2 = Fn([kk, ll](double t) { return std::sin((kk + ll) * t); });
            r.params = {{"k", kk}, {"l", ll}};
            rows.push_back(std::move(r));
        }
}

SampleRecord realize(const RowSpec& row, double t0, double t1, Eigen::Index n,
                     bool two_labels, std::optional<double> noise_snr_db,
                     uint64_t noise_seed) {
    SampleRecord rec;
    rec.family_id = row.family;
    rec.params = row.params;
    Signal s1 = sample_function({row.family + ".x1", row.x1}, t0, t1, n);
    Signal s2 = sample_function({row.family + ".x2", row.x2}, t0, t1, n);
    if (row.product) {
        Signal prod = with_samples(s1, (s1.samples.array() * s2.samples.array()).matrix());
        rec.input = prod;
        rec.labels = {prod};
        rec.clean_trend = with_samples(s1, Vec::Zero(n));
    } else {
        rec.input = with_samples(s1, s1.samples + s2.samples);
        if (two_labels)
            rec.labels = {s2, s1};
        else
            rec.labels = {s2};
        rec.clean_trend = two_labels ? with_samples(s1, Vec::Zero(n)) : s1;
    }
    if (noise_snr_db) rec.input = add_gaussian_noise(rec.input, *noise_snr_db, noise_seed);
    return rec;
}

} // namespace

SampleSet build_table_dataset(TableId table, Eigen::Index n, uint64_t seed) {
    if (n < 64) throw std::invalid_argument("build_table_dataset: need N >= 64");
    std::vector<RowSpec> rows;
    double t0 = 0.0, t1 = 3.0;
    std::optional<double> snr;
    bool two_labels = false;
    switch (table) {
        case TableId::T2: emit_avg_rows(rows); break;
        case TableId::T6:
            emit_avg_rows(rows);
            snr = 15.0;
            break;
        case TableId::T8:
            emit_decomp_rows(rows);
            t1 = 6.0;
            two_labels = true;
            break;
        case TableId::T10:
            emit_decomp_rows(rows);
            t1 = 6.0;
            snr = 25.0;
            two_labels = true;
            break;
        case TableId::T12:
            emit_ortho_rows(rows);
            t1 = 2.0 * 3.14159265358979323846;
            two_labels = true;
            break;
    }
    SampleSet set;
    set.records.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i)
        set.records.push_back(
            realize(rows[i], t0, t1, n, two_labels, snr, derive_seed(seed, i)));
    split_train_val(set, 0.7, seed);
    return set;
}

void split_train_val(SampleSet& set, double ratio, uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("split_train_val: ratio must lie in (0, 1)");
    const size_t n = set.records.size();
    if (n < 2) throw std::invalid_argument("split_train_val: need at least 2 records");
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng(derive_seed(seed, 0x5911));
    deterministic_shuffle(order, rng);
    const auto n_train =
        static_cast<size_t>(std::floor(ratio * static_cast<double>(n) + 0.5));
    set.split.assign(n, Split::validation);
    for (size_t i = 0; i < std::min(n_train, n); ++i) set.split[order[i]] = Split::train;
}

} // namespace rrcnn

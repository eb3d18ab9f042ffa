#include "rrcnn/train.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace rrcnn {

void TrainConfig::validate() const {
    if (!(lr > 0.0)) throw std::invalid_argument("TrainConfig: lr must be positive");
    if (!(lr_ortho > 0.0)) throw std::invalid_argument("TrainConfig: lr_ortho must be positive");
    if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    if (batch < 1) throw std::invalid_argument("TrainConfig: batch must be >= 1");
    if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
}

ModelParams sgd_step(const ModelParams& p, const GradientSet& g, double lr) {
    ModelParams out = p;
    for (size_t m = 0; m < out.blocks.size(); ++m)
        for (size_t i = 0; i < out.blocks[m].recursions.size(); ++i) {
            const auto& gr = g.blocks[m].recursions[i];
            if (!gr.w1.allFinite() || !gr.w2_raw.allFinite()) {
                for (Eigen::Index t = 0; t < gr.w1.size(); ++t)
                    if (!std::isfinite(gr.w1[t]))
                        throw std::runtime_error("sgd_step: non-finite gradient at block" +
                                                 std::to_string(m) + ".rec" + std::to_string(i) +
                                                 ".w1[" + std::to_string(t) + "]");
                for (Eigen::Index t = 0; t < gr.w2_raw.size(); ++t)
                    if (!std::isfinite(gr.w2_raw[t]))
                        throw std::runtime_error("sgd_step: non-finite gradient at block" +
                                                 std::to_string(m) + ".rec" + std::to_string(i) +
                                                 ".w2[" + std::to_string(t) + "]");
            }
            out.blocks[m].recursions[i].w1 -= lr * gr.w1;
            out.blocks[m].recursions[i].w2_raw -= lr * gr.w2_raw;
        }
    return out;
}

Mat stiefel_step(const Mat& wo, const Mat& gwo, double lr1) {
    if (wo.rows() != wo.cols() || gwo.rows() != wo.rows() || gwo.cols() != wo.cols())
        throw std::invalid_argument("stiefel_step: square shape mismatch");
    Mat stepped = wo - lr1 * gwo;
    Eigen::BDCSVD<Mat> svd(stepped, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[sv.size() - 1] <= 1e-12 * sv[0])
        throw std::runtime_error("stiefel_step: rank-deficient matrix, projection undefined");
    return svd.matrixU() * svd.matrixV().transpose();
}

namespace {

// Runs fn(i) for i in [0, count) over a fixed number of lanes. Results must
// land in per-index slots; reductions happen after the join, in index order.
void for_each_index(size_t count, int threads, const std::function<void(size_t)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w]() {
            for (size_t i = w; i < count; i += threads) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct PreparedRecord {
    const Vec* x = nullptr;
    Mat label;
};

std::vector<PreparedRecord> prepare(const SampleSet& data, const std::vector<size_t>& idx,
                                    int m_components) {
    std::vector<PreparedRecord> out(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
        const SampleRecord& rec = data.records[idx[i]];
        if (static_cast<int>(rec.labels.size()) != m_components)
            throw std::invalid_argument("train: record has " +
                                        std::to_string(rec.labels.size()) +
                                        " labels but the model has " +
                                        std::to_string(m_components) + " blocks");
        std::vector<Vec> cols;
        cols.reserve(rec.labels.size());
        for (const auto& lab : rec.labels) cols.push_back(lab.samples);
        out[i].x = &rec.input.samples;
        out[i].label = stack_components(cols);
    }
    return out;
}

// Sequential (default) or pairwise-tree reduction over per-record gradients.
GradientSet reduce_grads(std::vector<GradientSet>& parts, const ModelParams& p,
                         bool tree) {
    if (!tree) {
        GradientSet total = GradientSet::zeros_like(p);
        for (const auto& g : parts) total.accumulate(g);
        return total;
    }
    size_t n = parts.size();
    while (n > 1) {
        const size_t half = (n + 1) / 2;
        for (size_t i = 0; i + half < n; ++i) parts[i].accumulate(parts[i + half]);
        n = half;
    }
    return parts.empty() ? GradientSet::zeros_like(p) : parts.front();
}

} // namespace

TrainResult train_from(ModelParams start, const SampleSet& data, const LossSpec& spec,
                       const TrainConfig& cfg) {
    cfg.validate();
    start.validate();
    const int m_components = start.num_blocks();
    spec.validate(m_components);

    const auto train_idx = data.indices_of(Split::train);
    const auto val_idx = data.indices_of(Split::validation);
    if (train_idx.empty()) throw std::invalid_argument("train: no training records");

    auto train_recs = prepare(data, train_idx, m_components);
    auto val_recs = prepare(data, val_idx, m_components);

    const Eigen::Index n = train_recs.front().x->size();
    for (const auto& r : train_recs)
        if (r.x->size() != n) throw std::invalid_argument("train: records differ in N");
    for (const auto& r : val_recs)
        if (r.x->size() != n) throw std::invalid_argument("train: records differ in N");

    ModelParams params = std::move(start);
    TrainResult res;
    res.best_val_loss = std::numeric_limits<double>::infinity();
    res.best_epoch = cfg.start_epoch;

    double lr = cfg.lr;
    double prev_train_loss = std::numeric_limits<double>::infinity();
    int since_improvement = 0;

    std::vector<GradientSet> slot_grads;
    std::vector<double> slot_loss;

    for (int e = 0; e < cfg.epochs; ++e) {
        const int epoch = cfg.start_epoch + e;
        double loss_sum = 0.0;

        for (size_t b0 = 0; b0 < train_recs.size(); b0 += cfg.batch) {
            const size_t bsz = std::min<size_t>(cfg.batch, train_recs.size() - b0);
            slot_grads.assign(bsz, GradientSet{});
            slot_loss.assign(bsz, 0.0);
            for_each_index(bsz, cfg.threads, [&](size_t i) {
                BackpropResult bp =
                    backprop(*train_recs[b0 + i].x, train_recs[b0 + i].label, params, spec);
                slot_grads[i] = std::move(bp.grad);
                slot_loss[i] = bp.loss;
            });
            for (double l : slot_loss) loss_sum += l;
            GradientSet total = reduce_grads(slot_grads, params, cfg.tree_reduce);
            total.scale(1.0 / static_cast<double>(bsz));

            if (params.ortho && total.wo)
                params.ortho->Wo = stiefel_step(params.ortho->Wo, *total.wo, cfg.lr_ortho);
            params = sgd_step(params, total, lr);
        }
        const double train_loss = loss_sum / static_cast<double>(train_recs.size());

        double val_loss = std::numeric_limits<double>::quiet_NaN();
        if (!val_recs.empty()) {
            slot_loss.assign(val_recs.size(), 0.0);
            for_each_index(val_recs.size(), cfg.threads, [&](size_t i) {
                slot_loss[i] = evaluate_loss(*val_recs[i].x, val_recs[i].label, params, spec);
            });
            double s = 0.0;
            for (double l : slot_loss) s += l;
            val_loss = s / static_cast<double>(val_recs.size());
        }

        if (!std::isfinite(train_loss) || (!val_recs.empty() && !std::isfinite(val_loss)))
            throw divergence_error("training diverged at epoch " + std::to_string(epoch),
                                   epoch);

        res.history.push_back({epoch, train_loss, val_loss, lr});

        if (!val_recs.empty()) {
            if (val_loss < res.best_val_loss - cfg.tol) {
                res.best_val_loss = val_loss;
                res.best_epoch = epoch;
                res.params = params;
                since_improvement = 0;
            } else {
                ++since_improvement;
            }
            if (since_improvement >= cfg.patience) {
                res.early_stopped = true;
                break;
            }
        }

        if (cfg.lr_halving && train_loss > prev_train_loss) lr *= 0.5;
        prev_train_loss = train_loss;
    }

    if (val_recs.empty()) {
        res.params = std::move(params);
        res.best_val_loss = std::numeric_limits<double>::quiet_NaN();
        res.best_epoch = res.history.empty() ? cfg.start_epoch : res.history.back().epoch;
    }
    return res;
}

TrainResult train(const SampleSet& data, const ModelShape& shape, const LossSpec& spec,
                  const TrainConfig& cfg) {
    ModelParams p = init_params(shape, cfg.seed);
    if (spec.kind == LossKind::ORTHO_CONSTRAINED) {
        if (data.records.empty()) throw std::invalid_argument("train: empty dataset");
        const Eigen::Index n = data.records.front().input.size();
        OrthoParams op;
        op.Wo = Mat::Identity(n, n);
        op.omega2 = spec.omega2;
        p.ortho = std::move(op);
    }
    return train_from(std::move(p), data, spec, cfg);
}

GridSearchResult grid_search(const SampleSet& data, const std::vector<ModelShape>& grid,
                             const LossSpec& spec, const TrainConfig& cfg) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
    GridSearchResult out;
    std::vector<std::pair<double, int>> ranking; // (val loss, total taps)
    for (const auto& shape : grid) {
        TrainResult r = train(data, shape, spec, cfg);
        GridCandidate cand;
        cand.shape = shape;
        cand.train_loss = r.history.empty() ? 0.0 : r.history.back().train_loss;
        cand.val_loss = std::isfinite(r.best_val_loss) ? r.best_val_loss
                                                       : cand.train_loss;
        out.table.push_back(cand);
        ranking.emplace_back(cand.val_loss, shape.param_count());
    }
    size_t best = 0;
    for (size_t i = 1; i < ranking.size(); ++i)
        if (ranking[i] < ranking[best]) best = i;
    out.best = out.table[best].shape;
    return out;
}

} // namespace rrcnn

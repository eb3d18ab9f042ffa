#pragma once

#include <cstdint>
#include <vector>

#include "rrcnn/backprop.hpp"
#include "rrcnn/generators.hpp"
#include "rrcnn/loss.hpp"
#include "rrcnn/model.hpp"

namespace rrcnn {

struct TrainConfig {
    double lr = 1e-4;       // constant step for the filter weights
    double lr_ortho = 1e-3; // step for the ortho matrix (projected afterwards)
    int epochs = 300;
    int batch = 32;
    uint64_t seed = 42;
    bool lr_halving = true; // halve lr whenever the epoch training loss increases
    double tol = 1e-7;      // minimum validation improvement that resets patience
    int patience = 20;      // early-stop patience in epochs (validation-based)
    int threads = 0;        // worker lanes for per-record gradients; 0 = hardware
    int start_epoch = 0;    // epoch numbering offset when resuming
    bool tree_reduce = false; // opt-in pairwise-tree gradient reduction (see docs)

    void validate() const;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0; // NaN when the set has no validation records
    double lr = 0.0;
};

struct TrainResult {
    ModelParams params; // best-validation snapshot (final params if no validation)
    std::vector<EpochStats> history;
    double best_val_loss = 0.0;
    int best_epoch = 0;
    bool early_stopped = false;
};

// One plain gradient-descent step on the filter weights; the ortho matrix is
// left untouched (stiefel_step owns it). Rejects non-finite gradients.
ModelParams sgd_step(const ModelParams& p, const GradientSet& g, double lr);

// Gradient step on the ortho matrix followed by projection back onto the
// Stiefel manifold via the reduced SVD: P(A) = U V^T.
Mat stiefel_step(const Mat& wo, const Mat& gwo, double lr1);

// Mini-batch gradient descent over the training split, batches taken in
// fixed record order, gradients averaged per batch. Per-record gradients may
// be computed on worker lanes; the reduction order stays fixed.
TrainResult train(const SampleSet& data, const ModelShape& shape, const LossSpec& spec,
                  const TrainConfig& cfg);

// Same loop starting from existing parameters (checkpoint resume).
TrainResult train_from(ModelParams start, const SampleSet& data, const LossSpec& spec,
                       const TrainConfig& cfg);

struct GridCandidate {
    ModelShape shape;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct GridSearchResult {
    ModelShape best;
    std::vector<GridCandidate> table;
};

// Exhaustively trains each candidate shape with the given (short) budget and
// ranks by validation loss; ties go to the smaller total filter length.
GridSearchResult grid_search(const SampleSet& data, const std::vector<ModelShape>& grid,
                             const LossSpec& spec, const TrainConfig& cfg);

} // namespace rrcnn

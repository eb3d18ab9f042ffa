#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rrcnn/conv.hpp"
#include "rrcnn/rng.hpp"
#include "rrcnn/signal.hpp"
#include "rrcnn/softmax.hpp"

namespace rrcnn {

// One recursion step of an inner-loop block: the free first-layer filter and
// the raw (pre-softmax) second-layer filter.
struct RecursionParams {
    Vec w1;     // length K1, unconstrained
    Vec w2_raw; // length K2, pushed through softmax in the forward pass
};

struct BlockParams {
    std::vector<RecursionParams> recursions;
    int steps() const { return static_cast<int>(recursions.size()); }
};

// Optional orthogonal output transform: component i with i appearing in
// omega2 is reported as Wo * imf_i. Wo is bound to the signal length N.
struct OrthoParams {
    Mat Wo;
    std::vector<std::pair<int, int>> omega2; // 0-based component index pairs
};

struct ModelParams {
    std::vector<BlockParams> blocks;
    std::optional<OrthoParams> ortho;

    int num_blocks() const { return static_cast<int>(blocks.size()); }
    void validate() const;
};

// Architecture description: M blocks, per-block recursion count and filter
// lengths. Filter lengths are odd so "same" convolution stays symmetric.
struct ModelShape {
    int blocks = 1;
    std::vector<int> steps;          // S per block
    std::vector<int> k1;             // per block
    std::vector<int> k2;             // per block

    static ModelShape uniform(int m, int s, int k1_, int k2_);
    void validate() const;
    int param_count() const;
    std::string describe() const;
};

// W1 taps start i.i.d. uniform in [-1/K1, 1/K1]; W2_raw starts at zero so the
// second layer opens as a plain moving average.
ModelParams init_params(const ModelShape& shape, uint64_t seed);
ModelParams zero_params(const ModelShape& shape);
ModelShape shape_of(const ModelParams& p);

// Per-recursion forward intermediates, kept for backpropagation.
// x_steps[i] is X^(i) (so x_steps.size() == S+1), c1[i] and c2[i] are the
// outputs of the two convolution layers at recursion i.
struct BlockTrace {
    std::vector<Vec> x_steps;
    std::vector<Vec> c1;
    std::vector<Vec> c2;
};

// Inner-loop block: S residual recursions of
//   C1 = tanh(conv(X, W1)),  C2 = conv(C1, softmax(W2_raw)),  X <- X - C2
// Returns X^(S); input minus the return value is the block's local average.
Vec block_forward(const Vec& x, const BlockParams& p, BlockTrace* trace = nullptr);

struct CascadeResult {
    std::vector<Vec> imfs;      // raw block outputs, pre ortho transform
    Vec residue;
    std::vector<Vec> outputs;   // reported components (ortho applied if present)
    std::vector<BlockTrace> traces;
};

// Cascade of M blocks: Y_m = block_m(X_{m-1}), X_m = X_{m-1} - Y_m.
// The reconstruction identity sum(imfs) + residue = x holds on the raw imfs.
CascadeResult cascade_forward(const Vec& x, const ModelParams& p, bool want_traces = false);

// Gradient container, shape-congruent with ModelParams.
struct GradientSet {
    std::vector<BlockParams> blocks;
    std::optional<Mat> wo;

    static GradientSet zeros_like(const ModelParams& p);
    void accumulate(const GradientSet& other, double scale = 1.0);
    void scale(double s);
};

// Flat parameter views used by the finite-difference oracle and the
// divergence checks; order is blocks, then recursions, w1 taps then w2 taps,
// then Wo row-major.
int flat_param_count(const ModelParams& p);
double get_flat_param(const ModelParams& p, int idx);
void set_flat_param(ModelParams& p, int idx, double v);
double get_flat_grad(const GradientSet& g, const ModelParams& p, int idx);
void add_flat_grad(GradientSet& g, const ModelParams& p, int idx, double v);
std::string flat_param_name(const ModelParams& p, int idx);

} // namespace rrcnn

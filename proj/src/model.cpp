#include "rrcnn/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rrcnn {

void ModelParams::validate() const {
    if (blocks.empty()) throw std::invalid_argument("ModelParams: no blocks");
    for (const auto& b : blocks) {
        if (b.recursions.empty())
            throw std::invalid_argument("ModelParams: block with no recursions");
        for (const auto& r : b.recursions) {
            if (r.w1.size() < 3 || r.w1.size() % 2 == 0)
                throw std::invalid_argument("ModelParams: W1 length must be odd and >= 3");
            if (r.w2_raw.size() < 3 || r.w2_raw.size() % 2 == 0)
                throw std::invalid_argument("ModelParams: W2 length must be odd and >= 3");
            if (!r.w1.allFinite() || !r.w2_raw.allFinite())
                throw std::invalid_argument("ModelParams: non-finite filter tap");
        }
    }
    if (ortho) {
        const Mat& w = ortho->Wo;
        if (w.rows() != w.cols()) throw shape_error("ortho matrix must be square");
        double res = (w * w.transpose() - Mat::Identity(w.rows(), w.cols())).norm();
        if (res > 1e-8)
            throw std::invalid_argument("ortho matrix is not orthogonal (residual " +
                                        std::to_string(res) + ")");
        for (auto [i, j] : ortho->omega2)
            if (i == j || i < 0 || j < 0 || i >= num_blocks() || j >= num_blocks())
                throw std::invalid_argument("ortho omega2 contains an invalid pair");
    }
}

ModelShape ModelShape::uniform(int m, int s, int k1_, int k2_) {
    ModelShape shape;
    shape.blocks = m;
    shape.steps.assign(m, s);
    shape.k1.assign(m, k1_);
    shape.k2.assign(m, k2_);
    return shape;
}

void ModelShape::validate() const {
    if (blocks < 1) throw std::invalid_argument("ModelShape: need at least one block");
    if (static_cast<int>(steps.size()) != blocks || static_cast<int>(k1.size()) != blocks ||
        static_cast<int>(k2.size()) != blocks)
        throw std::invalid_argument("ModelShape: per-block lists must have length M");
    for (int m = 0; m < blocks; ++m) {
        if (steps[m] < 1) throw std::invalid_argument("ModelShape: S must be >= 1");
        if (k1[m] < 3 || k1[m] % 2 == 0 || k2[m] < 3 || k2[m] % 2 == 0)
            throw std::invalid_argument("ModelShape: filter lengths must be odd and >= 3");
    }
}

int ModelShape::param_count() const {
    int n = 0;
    for (int m = 0; m < blocks; ++m) n += steps[m] * (k1[m] + k2[m]);
    return n;
}

std::string ModelShape::describe() const {
    std::ostringstream os;
    os << "M=" << blocks;
    for (int m = 0; m < blocks; ++m)
        os << " [S=" << steps[m] << " K1=" << k1[m] << " K2=" << k2[m] << "]";
    return os.str();
}

ModelParams init_params(const ModelShape& shape, uint64_t seed) {
    shape.validate();
    Rng rng(derive_seed(seed, 0x1217));
    ModelParams p;
    p.blocks.resize(shape.blocks);
    for (int m = 0; m < shape.blocks; ++m) {
        auto& blk = p.blocks[m];
        blk.recursions.resize(shape.steps[m]);
        for (auto& rec : blk.recursions) {
            const double a = 1.0 / static_cast<double>(shape.k1[m]);
            rec.w1.resize(shape.k1[m]);
            for (Eigen::Index i = 0; i < rec.w1.size(); ++i) rec.w1[i] = rng.uniform(-a, a);
            rec.w2_raw = Vec::Zero(shape.k2[m]);
        }
    }
    return p;
}

ModelParams zero_params(const ModelShape& shape) {
    shape.validate();
    ModelParams p;
    p.blocks.resize(shape.blocks);
    for (int m = 0; m < shape.blocks; ++m) {
        auto& blk = p.blocks[m];
        blk.recursions.resize(shape.steps[m]);
        for (auto& rec : blk.recursions) {
            rec.w1 = Vec::Zero(shape.k1[m]);
            rec.w2_raw = Vec::Zero(shape.k2[m]);
        }
    }
    return p;
}

ModelShape shape_of(const ModelParams& p) {
    ModelShape s;
    s.blocks = p.num_blocks();
    for (const auto& b : p.blocks) {
        s.steps.push_back(b.steps());
        s.k1.push_back(static_cast<int>(b.recursions.front().w1.size()));
        s.k2.push_back(static_cast<int>(b.recursions.front().w2_raw.size()));
    }
    return s;
}

Vec block_forward(const Vec& x, const BlockParams& p, BlockTrace* trace) {
    Vec cur = x;
    if (trace) {
        trace->x_steps.clear();
        trace->c1.clear();
        trace->c2.clear();
        trace->x_steps.push_back(cur);
    }
    for (const auto& rec : p.recursions) {
        Vec c1 = conv1d_same<double>(cur, rec.w1);
        c1 = c1.array().tanh();
        Vec s = softmax<double>(rec.w2_raw);
        Vec c2 = conv1d_same<double>(c1, s);
        cur -= c2;
        if (trace) {
            trace->c1.push_back(std::move(c1));
            trace->c2.push_back(std::move(c2));
            trace->x_steps.push_back(cur);
        }
    }
    return cur;
}

CascadeResult cascade_forward(const Vec& x, const ModelParams& p, bool want_traces) {
    // Shape checks only: the training loop legitimately evaluates the loss at
    // a Wo that has taken a gradient step but not yet been projected back
    // onto the manifold, so the strict orthogonality invariant is enforced at
    // construction and serialization boundaries instead.
    if (p.blocks.empty()) throw std::invalid_argument("cascade_forward: no blocks");
    if (p.ortho && p.ortho->Wo.rows() != p.ortho->Wo.cols())
        throw shape_error("cascade_forward: ortho matrix must be square");
    if (p.ortho && p.ortho->Wo.rows() != x.size())
        throw shape_error("ortho matrix is bound to N=" + std::to_string(p.ortho->Wo.rows()) +
                          " but input has N=" + std::to_string(x.size()));
    CascadeResult res;
    if (want_traces) res.traces.resize(p.blocks.size());
    Vec cur = x;
    for (size_t m = 0; m < p.blocks.size(); ++m) {
        Vec imf = block_forward(cur, p.blocks[m], want_traces ? &res.traces[m] : nullptr);
        cur -= imf;
        res.imfs.push_back(std::move(imf));
    }
    res.residue = std::move(cur);
    res.outputs = res.imfs;
    if (p.ortho) {
        for (auto [i, j] : p.ortho->omega2) {
            res.outputs[i] = p.ortho->Wo * res.imfs[i];
            res.outputs[j] = p.ortho->Wo * res.imfs[j];
        }
    }
    return res;
}

GradientSet GradientSet::zeros_like(const ModelParams& p) {
    GradientSet g;
    g.blocks.resize(p.blocks.size());
    for (size_t m = 0; m < p.blocks.size(); ++m) {
        g.blocks[m].recursions.resize(p.blocks[m].recursions.size());
        for (size_t i = 0; i < p.blocks[m].recursions.size(); ++i) {
            g.blocks[m].recursions[i].w1 = Vec::Zero(p.blocks[m].recursions[i].w1.size());
            g.blocks[m].recursions[i].w2_raw =
                Vec::Zero(p.blocks[m].recursions[i].w2_raw.size());
        }
    }
    if (p.ortho) g.wo = Mat::Zero(p.ortho->Wo.rows(), p.ortho->Wo.cols());
    return g;
}

void GradientSet::accumulate(const GradientSet& other, double scale) {
    for (size_t m = 0; m < blocks.size(); ++m)
        for (size_t i = 0; i < blocks[m].recursions.size(); ++i) {
            blocks[m].recursions[i].w1 += scale * other.blocks[m].recursions[i].w1;
            blocks[m].recursions[i].w2_raw += scale * other.blocks[m].recursions[i].w2_raw;
        }
    if (wo && other.wo) *wo += scale * *other.wo;
}

void GradientSet::scale(double s) {
    for (auto& b : blocks)
        for (auto& r : b.recursions) {
            r.w1 *= s;
            r.w2_raw *= s;
        }
    if (wo) *wo *= s;
}

namespace {

// Visits parameter slots in declaration order; returns true when idx hit.
template <class FVec, class FMat>
bool visit_flat(const ModelParams& p, int idx, FVec&& on_vec, FMat&& on_mat) {
    int base = 0;
    for (size_t m = 0; m < p.blocks.size(); ++m)
        for (size_t i = 0; i < p.blocks[m].recursions.size(); ++i) {
            const auto& rec = p.blocks[m].recursions[i];
            if (idx < base + rec.w1.size())
                return on_vec(static_cast<int>(m), static_cast<int>(i), true, idx - base), true;
            base += static_cast<int>(rec.w1.size());
            if (idx < base + rec.w2_raw.size())
                return on_vec(static_cast<int>(m), static_cast<int>(i), false, idx - base), true;
            base += static_cast<int>(rec.w2_raw.size());
        }
    if (p.ortho) {
        const int nn = static_cast<int>(p.ortho->Wo.size());
        if (idx < base + nn) {
            const int off = idx - base;
            const int n = static_cast<int>(p.ortho->Wo.cols());
            return on_mat(off / n, off % n), true;
        }
    }
    return false;
}

} // namespace

int flat_param_count(const ModelParams& p) {
    int n = 0;
    for (const auto& b : p.blocks)
        for (const auto& r : b.recursions)
            n += static_cast<int>(r.w1.size() + r.w2_raw.size());
    if (p.ortho) n += static_cast<int>(p.ortho->Wo.size());
    return n;
}

double get_flat_param(const ModelParams& p, int idx) {
    double out = 0.0;
    bool ok = visit_flat(
        p, idx,
        [&](int m, int i, bool first, int t) {
            const auto& rec = p.blocks[m].recursions[i];
            out = first ? rec.w1[t] : rec.w2_raw[t];
        },
        [&](int r, int c) { out = p.ortho->Wo(r, c); });
    if (!ok) throw std::out_of_range("flat parameter index out of range");
    return out;
}

void set_flat_param(ModelParams& p, int idx, double v) {
    bool ok = visit_flat(
        p, idx,
        [&](int m, int i, bool first, int t) {
            auto& rec = p.blocks[m].recursions[i];
            (first ? rec.w1[t] : rec.w2_raw[t]) = v;
        },
        [&](int r, int c) { p.ortho->Wo(r, c) = v; });
    if (!ok) throw std::out_of_range("flat parameter index out of range");
}

double get_flat_grad(const GradientSet& g, const ModelParams& p, int idx) {
    double out = 0.0;
    bool ok = visit_flat(
        p, idx,
        [&](int m, int i, bool first, int t) {
            const auto& rec = g.blocks[m].recursions[i];
            out = first ? rec.w1[t] : rec.w2_raw[t];
        },
        [&](int r, int c) { out = (*g.wo)(r, c); });
    if (!ok) throw std::out_of_range("flat gradient index out of range");
    return out;
}

void add_flat_grad(GradientSet& g, const ModelParams& p, int idx, double v) {
    bool ok = visit_flat(
        p, idx,
        [&](int m, int i, bool first, int t) {
            auto& rec = g.blocks[m].recursions[i];
            (first ? rec.w1[t] : rec.w2_raw[t]) += v;
        },
        [&](int r, int c) { (*g.wo)(r, c) += v; });
    if (!ok) throw std::out_of_range("flat gradient index out of range");
}

std::string flat_param_name(const ModelParams& p, int idx) {
    std::string name;
    bool ok = visit_flat(
        p, idx,
        [&](int m, int i, bool first, int t) {
            std::ostringstream os;
            os << "block" << m << ".rec" << i << (first ? ".w1[" : ".w2[") << t << "]";
            name = os.str();
        },
        [&](int r, int c) {
            std::ostringstream os;
            os << "Wo(" << r << "," << c << ")";
            name = os.str();
        });
    if (!ok) throw std::out_of_range("flat parameter index out of range");
    return name;
}

} // namespace rrcnn

#include "rrcnn/loss.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace rrcnn {

void LossSpec::validate(int num_components) const {
    if (eta < 0.0 || gamma < 0.0)
        throw std::invalid_argument("LossSpec: penalty weights must be non-negative");
    if (kind != LossKind::MSE_QTV && !omega1.empty())
        throw std::invalid_argument("LossSpec: omega1 only applies to the QTV loss");
    for (int m : omega1)
        if (m < 0 || m >= num_components)
            throw std::invalid_argument("LossSpec: omega1 index out of range");
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : omega2) {
        if (i == j || i < 0 || j < 0 || i >= num_components || j >= num_components)
            throw std::invalid_argument("LossSpec: omega2 pair out of range");
        if (!seen.insert({std::min(i, j), std::max(i, j)}).second)
            throw std::invalid_argument("LossSpec: duplicate omega2 pair");
    }
    if ((kind == LossKind::ORTHO_CONSTRAINED || kind == LossKind::ORTHO_PENALTY) &&
        omega2.empty())
        throw std::invalid_argument("LossSpec: orthogonality losses need omega2 pairs");
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "mse") return LossKind::MSE;
    if (s == "mse_qtv") return LossKind::MSE_QTV;
    if (s == "ortho_constrained") return LossKind::ORTHO_CONSTRAINED;
    if (s == "ortho_penalty") return LossKind::ORTHO_PENALTY;
    throw std::invalid_argument("unknown loss kind: " + s);
}

std::string to_string(LossKind k) {
    switch (k) {
        case LossKind::MSE: return "mse";
        case LossKind::MSE_QTV: return "mse_qtv";
        case LossKind::ORTHO_CONSTRAINED: return "ortho_constrained";
        case LossKind::ORTHO_PENALTY: return "ortho_penalty";
    }
    return "?";
}

Mat stack_components(const std::vector<Vec>& cols) {
    if (cols.empty()) throw std::invalid_argument("stack_components: empty stack");
    Mat out(cols.front().size(), cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != out.rows())
            throw std::invalid_argument("stack_components: ragged component lengths");
        out.col(j) = cols[j];
    }
    return out;
}

double loss_mse(const Mat& pred, const Mat& label) {
    if (pred.rows() != label.rows() || pred.cols() != label.cols())
        throw std::invalid_argument("loss_mse: shape mismatch");
    return (pred - label).squaredNorm();
}

double loss_qtv(const Mat& pred, const std::vector<int>& omega1) {
    double q = 0.0;
    for (int m : omega1) {
        if (m < 0 || m >= pred.cols()) throw std::invalid_argument("loss_qtv: bad index");
        const auto d = pred.col(m).tail(pred.rows() - 1) - pred.col(m).head(pred.rows() - 1);
        q += d.squaredNorm();
    }
    return q;
}

double loss_ortho_penalty(const Mat& pred, const std::vector<std::pair<int, int>>& omega2,
                          double gamma) {
    double p = 0.0;
    for (auto [i, j] : omega2) {
        if (i < 0 || j < 0 || i >= pred.cols() || j >= pred.cols())
            throw std::invalid_argument("loss_ortho_penalty: bad pair");
        const double ni = pred.col(i).norm();
        const double nj = pred.col(j).norm();
        if (ni == 0.0 || nj == 0.0)
            throw std::invalid_argument("loss_ortho_penalty: zero-norm component");
        p += std::abs(pred.col(i).dot(pred.col(j))) / (ni * nj);
    }
    return gamma * p;
}

double loss_ortho_constrained(const Mat& pred, const Mat& label, const Mat& wo,
                              const std::vector<std::pair<int, int>>& omega2) {
    if (pred.rows() != label.rows() || pred.cols() != label.cols())
        throw std::invalid_argument("loss_ortho_constrained: shape mismatch");
    if (wo.rows() != pred.rows() || wo.cols() != pred.rows())
        throw shape_error("loss_ortho_constrained: Wo must be N x N");
    std::set<int> paired;
    for (auto [i, j] : omega2) {
        paired.insert(i);
        paired.insert(j);
    }
    double l = 0.0;
    for (int m = 0; m < pred.cols(); ++m)
        if (!paired.count(m)) l += (pred.col(m) - label.col(m)).squaredNorm();
    for (auto [i, j] : omega2) {
        l += (wo * pred.col(i) - label.col(i)).squaredNorm();
        l += (wo * pred.col(j) - label.col(j)).squaredNorm();
    }
    return l;
}

double total_loss(const Mat& pred, const Mat& label, const LossSpec& spec,
                  const std::optional<OrthoParams>& ortho) {
    switch (spec.kind) {
        case LossKind::MSE: return loss_mse(pred, label);
        case LossKind::MSE_QTV:
            return loss_mse(pred, label) + spec.eta * loss_qtv(pred, spec.omega1);
        case LossKind::ORTHO_PENALTY:
            return loss_mse(pred, label) +
                   loss_ortho_penalty(pred, spec.omega2, spec.gamma);
        case LossKind::ORTHO_CONSTRAINED:
            if (!ortho)
                throw std::invalid_argument("ORTHO_CONSTRAINED loss needs ortho params");
            return loss_ortho_constrained(pred, label, ortho->Wo, spec.omega2);
    }
    throw std::logic_error("unreachable loss kind");
}

LossGrad loss_with_grad(const Mat& pred, const Mat& label, const LossSpec& spec,
                        const std::optional<OrthoParams>& ortho) {
    LossGrad out;
    out.dpred = Mat::Zero(pred.rows(), pred.cols());
    const Eigen::Index n = pred.rows();

    if (spec.kind == LossKind::ORTHO_CONSTRAINED) {
        if (!ortho) throw std::invalid_argument("ORTHO_CONSTRAINED loss needs ortho params");
        const Mat& wo = ortho->Wo;
        out.value = loss_ortho_constrained(pred, label, wo, spec.omega2);
        out.dwo = Mat::Zero(wo.rows(), wo.cols());
        std::set<int> paired;
        for (auto [i, j] : spec.omega2) {
            paired.insert(i);
            paired.insert(j);
        }
        for (int m = 0; m < pred.cols(); ++m)
            if (!paired.count(m)) out.dpred.col(m) += 2.0 * (pred.col(m) - label.col(m));
        for (auto [i, j] : spec.omega2)
            for (int m : {i, j}) {
                Vec r = wo * pred.col(m) - label.col(m);
                out.dpred.col(m) += 2.0 * (wo.transpose() * r);
                *out.dwo += 2.0 * r * pred.col(m).transpose();
            }
        return out;
    }

    out.value = loss_mse(pred, label);
    out.dpred = 2.0 * (pred - label);

    if (spec.kind == LossKind::MSE_QTV) {
        out.value += spec.eta * loss_qtv(pred, spec.omega1);
        for (int m : spec.omega1) {
            Vec d = pred.col(m).tail(n - 1) - pred.col(m).head(n - 1);
            out.dpred.col(m).head(n - 1) -= 2.0 * spec.eta * d;
            out.dpred.col(m).tail(n - 1) += 2.0 * spec.eta * d;
        }
    } else if (spec.kind == LossKind::ORTHO_PENALTY) {
        out.value += loss_ortho_penalty(pred, spec.omega2, spec.gamma);
        for (auto [i, j] : spec.omega2) {
            const Vec& ci = pred.col(i);
            const Vec& cj = pred.col(j);
            const double ni = ci.norm(), nj = cj.norm();
            const double d = ci.dot(cj);
            const double sgn = (d > 0.0) - (d < 0.0);
            out.dpred.col(i) +=
                spec.gamma * (sgn * cj / (ni * nj) - std::abs(d) * ci / (ni * ni * ni * nj));
            out.dpred.col(j) +=
                spec.gamma * (sgn * ci / (ni * nj) - std::abs(d) * cj / (nj * nj * nj * ni));
        }
    }
    return out;
}

} // namespace rrcnn

#include "rrcnn/backprop.hpp"

#include <cmath>
#include <stdexcept>

namespace rrcnn {

double evaluate_loss(const Vec& x, const Mat& label, const ModelParams& p,
                     const LossSpec& spec) {
    CascadeResult fwd = cascade_forward(x, p);
    return total_loss(stack_components(fwd.imfs), label, spec, p.ortho);
}

BackpropResult backprop(const Vec& x, const Mat& label, const ModelParams& p,
                        const LossSpec& spec) {
    const int m_blocks = p.num_blocks();
    if (label.cols() != m_blocks)
        throw std::invalid_argument("backprop: label has " + std::to_string(label.cols()) +
                                    " components but model has " + std::to_string(m_blocks));
    spec.validate(m_blocks);
    if ((spec.kind == LossKind::ORTHO_CONSTRAINED) != p.ortho.has_value())
        throw std::invalid_argument(
            "backprop: ortho params must be present iff the constrained loss is used");

    CascadeResult fwd = cascade_forward(x, p, /*want_traces=*/true);
    LossGrad lg = loss_with_grad(stack_components(fwd.imfs), label, spec, p.ortho);

    BackpropResult out;
    out.loss = lg.value;
    out.grad = GradientSet::zeros_like(p);
    if (lg.dwo) out.grad.wo = std::move(*lg.dwo);

    // Walk blocks last to first. g_next is dL/dX_m, the gradient flowing
    // into block m through the running remainder (zero for the residue).
    Vec g_next = Vec::Zero(x.size());
    for (int m = m_blocks - 1; m >= 0; --m) {
        const BlockParams& blk = p.blocks[m];
        const BlockTrace& tr = fwd.traces[m];
        auto& gblk = out.grad.blocks[m];

        // X_m = X_{m-1} - imf_m, so the imf sees dpred minus g_next.
        Vec vbar = lg.dpred.col(m) - g_next;
        for (int i = blk.steps() - 1; i >= 0; --i) {
            const auto& rec = blk.recursions[i];
            const Vec s = softmax<double>(rec.w2_raw);
            const Vec c2bar = -vbar;
            // second layer
            const Vec sbar =
                conv1d_same_weight_grad<double>(tr.c1[i], c2bar, rec.w2_raw.size());
            gblk.recursions[i].w2_raw += softmax_backward<double>(s, sbar);
            Vec c1bar = conv1d_same_input_grad<double>(c2bar, s);
            // tanh and first layer
            Vec abar = (c1bar.array() * (1.0 - tr.c1[i].array().square())).matrix();
            gblk.recursions[i].w1 +=
                conv1d_same_weight_grad<double>(tr.x_steps[i], abar, rec.w1.size());
            vbar += conv1d_same_input_grad<double>(abar, rec.w1);
        }
        g_next += vbar; // dL/dX_{m-1} = (through block) + (direct remainder path)
    }
    return out;
}

GradCheckReport grad_check(const ModelParams& p, const Vec& x, const Mat& label,
                           const LossSpec& spec, double eps, int inject_fault_index) {
    if (!(eps >= 1e-8 && eps <= 1e-4))
        throw std::invalid_argument("grad_check: eps must lie in [1e-8, 1e-4]");
    BackpropResult bp = backprop(x, label, p, spec);

    GradCheckReport rep;
    ModelParams work = p;
    const int count = flat_param_count(p);
    for (int idx = 0; idx < count; ++idx) {
        const double theta = get_flat_param(p, idx);
        const double h = eps * std::max(1.0, std::abs(theta));
        set_flat_param(work, idx, theta + h);
        const double lp = evaluate_loss(x, label, work, spec);
        set_flat_param(work, idx, theta - h);
        const double lm = evaluate_loss(x, label, work, spec);
        set_flat_param(work, idx, theta);

        const double numeric = (lp - lm) / (2.0 * h);
        double analytic = get_flat_grad(bp.grad, p, idx);
        if (idx == inject_fault_index) analytic += 1e-3;
        const double dev =
            std::abs(analytic - numeric) /
            std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        if (dev >= rep.max_rel_dev) {
            rep.max_rel_dev = dev;
            rep.worst_index = idx;
            rep.analytic_at_worst = analytic;
            rep.numeric_at_worst = numeric;
        }
    }
    if (rep.worst_index >= 0) rep.worst_name = flat_param_name(p, rep.worst_index);
    return rep;
}

} // namespace rrcnn

#pragma once

#include <string>

#include "rrcnn/loss.hpp"
#include "rrcnn/model.hpp"

namespace rrcnn {

// Loss and its gradient with respect to every filter tap (and Wo when the
// constrained loss is active), by reverse accumulation through the exact
// forward trace of the cascade.
struct BackpropResult {
    double loss = 0.0;
    GradientSet grad;
};

BackpropResult backprop(const Vec& x, const Mat& label, const ModelParams& p,
                        const LossSpec& spec);

// Forward-only loss evaluation on raw block outputs (shared by the trainer
// and the finite-difference oracle).
double evaluate_loss(const Vec& x, const Mat& label, const ModelParams& p,
                     const LossSpec& spec);

// Central-difference verification of backprop, coordinate by coordinate.
// Deviations are measured relative to max(|analytic|, |numeric|, 1e-6).
// inject_fault_index, when >= 0, perturbs that analytic coordinate by 1e-3
// so a detector test can confirm the report points at the right place.
struct GradCheckReport {
    double max_rel_dev = 0.0;
    int worst_index = -1;
    std::string worst_name;
    double analytic_at_worst = 0.0;
    double numeric_at_worst = 0.0;
};

GradCheckReport grad_check(const ModelParams& p, const Vec& x, const Mat& label,
                           const LossSpec& spec, double eps,
                           int inject_fault_index = -1);

} // namespace rrcnn

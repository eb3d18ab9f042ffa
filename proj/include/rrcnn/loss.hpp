#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rrcnn/model.hpp"
#include "rrcnn/signal.hpp"

namespace rrcnn {

enum class LossKind { MSE, MSE_QTV, ORTHO_CONSTRAINED, ORTHO_PENALTY };

// Which loss applies and with which weights / component index sets.
// omega1 selects smooth components for the quadratic-total-variation term,
// omega2 lists component pairs that should come out orthogonal.
struct LossSpec {
    LossKind kind = LossKind::MSE;
    double eta = 0.0;   // QTV weight
    double gamma = 0.0; // inner-product penalty weight
    std::vector<int> omega1;
    std::vector<std::pair<int, int>> omega2;

    void validate(int num_components) const;
};

LossKind loss_kind_from_string(const std::string& s);
std::string to_string(LossKind k);

// Component stacks are N x M matrices, one column per component.
Mat stack_components(const std::vector<Vec>& cols);

// Squared Frobenius norm of pred - label.
double loss_mse(const Mat& pred, const Mat& label);

// Sum of squared first differences over the selected components.
double loss_qtv(const Mat& pred, const std::vector<int>& omega1);

// gamma * sum over pairs of |<c_i, c_j>| / (|c_i| |c_j|).
double loss_ortho_penalty(const Mat& pred, const std::vector<std::pair<int, int>>& omega2,
                          double gamma);

// Constrained form: plain squared error on components outside the pairs,
// squared error of Wo-transformed components on the pairs.
double loss_ortho_constrained(const Mat& pred, const Mat& label, const Mat& wo,
                              const std::vector<std::pair<int, int>>& omega2);

// Total loss for a spec; requires p.ortho when kind == ORTHO_CONSTRAINED.
double total_loss(const Mat& pred, const Mat& label, const LossSpec& spec,
                  const std::optional<OrthoParams>& ortho);

// dL/dpred (and dL/dWo when the constrained loss is active).
struct LossGrad {
    double value = 0.0;
    Mat dpred;
    std::optional<Mat> dwo;
};
LossGrad loss_with_grad(const Mat& pred, const Mat& label, const LossSpec& spec,
                        const std::optional<OrthoParams>& ortho);

} // namespace rrcnn

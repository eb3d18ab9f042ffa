#pragma once

#include <vector>

#include "rrcnn/extrema.hpp"
#include "rrcnn/signal.hpp"

namespace rrcnn {

// Low-pass window shapes. The triangular window (uniform convolved with
// itself) is the textbook double average but its Fejer-kernel sidelobes leak
// a few percent of the surviving oscillation per sift, enough to erode the
// IMF to nothing over a full inner-loop budget. The smooth bump window
// exp(-1/(1-u^2)) has spectral decay faster than any polynomial, so content
// above the cutoff survives and the relative-change stop actually fires.
enum class IfWindow { triangular, mollifier };

// Iterative-filtering configuration. The filter half-length at each inner
// step is round(xi * N / #extrema), clamped to [1, N/2]; xi = 2 spans one
// full mean extrema period.
struct IfConfig {
    double xi = 2.0;
    double inner_tol = 1e-3;
    int max_inner = 200;
    int max_imfs = 8;
    IfWindow window = IfWindow::mollifier;

    void validate() const;
};

struct DecompositionResult {
    std::vector<Signal> imfs;
    Signal residue;
};

// Normalized window weights for half-length l (length 2l+1, sum 1).
Vec if_window_weights(Eigen::Index l, IfWindow window);

// Moving average with a normalized symmetric window of half-length l. The
// signal is mirror-extended by l samples at each end, so constants pass
// through unchanged.
Signal if_local_average(const Signal& x, Eigen::Index l,
                        IfWindow window = IfWindow::triangular);

// Inner sifting loop: subtract the local average until the relative update
// ||x_{n+1} - x_n|| / ||x_n|| drops below inner_tol or max_inner is hit.
struct SiftResult {
    Signal imf;
    int iterations = 0;
};
SiftResult if_extract_imf(const Signal& x, const IfConfig& cfg);

// Outer loop: peel IMFs off the running remainder until fewer than two
// extrema survive or max_imfs is reached; the remainder becomes the residue.
DecompositionResult if_decompose(const Signal& x, const IfConfig& cfg);

} // namespace rrcnn

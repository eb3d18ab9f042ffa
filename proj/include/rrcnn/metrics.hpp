#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rrcnn/signal.hpp"

namespace rrcnn {

double mae(const Vec& pred, const Vec& truth);
double rmse(const Vec& pred, const Vec& truth);

// Absolute cosine similarity |<c1, c2>| / (|c1| |c2|); both inputs nonzero.
double rho(const Vec& c1, const Vec& c2);

inline double mae(const Signal& a, const Signal& b) { return mae(a.samples, b.samples); }
inline double rmse(const Signal& a, const Signal& b) { return rmse(a.samples, b.samples); }
inline double rho(const Signal& a, const Signal& b) { return rho(a.samples, b.samples); }

// One evaluation row: errors of one predicted component of one method, with
// the pair-orthogonality value attached where the experiment defines one.
struct MetricReport {
    std::string method;
    std::string example;
    std::string component; // "avg", "c1", "c2", ...
    double mae_value = 0.0;
    double rmse_value = 0.0;
    std::optional<double> rho_value;
};

} // namespace rrcnn

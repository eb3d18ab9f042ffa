#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace rrcnn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Uniformly sampled real-valued series. Sample k lives at t0 + k*dt.
struct Signal {
    Vec samples;
    double t0 = 0.0;
    double dt = 1.0;

    Signal() = default;
    Signal(Vec s, double t0_, double dt_) : samples(std::move(s)), t0(t0_), dt(dt_) {}

    Eigen::Index size() const { return samples.size(); }
    double time(Eigen::Index k) const { return t0 + static_cast<double>(k) * dt; }

    bool same_grid(const Signal& other, double tol = 1e-12) const {
        return samples.size() == other.samples.size() &&
               std::abs(t0 - other.t0) <= tol && std::abs(dt - other.dt) <= tol;
    }

    void validate() const {
        if (samples.size() < 2)
            throw std::invalid_argument("Signal: need at least 2 samples, got " +
                                        std::to_string(samples.size()));
        if (!(dt > 0.0))
            throw std::invalid_argument("Signal: dt must be positive");
        if (!samples.allFinite())
            throw std::invalid_argument("Signal: non-finite sample");
    }
};

inline Signal with_samples(const Signal& like, Vec s) {
    return Signal(std::move(s), like.t0, like.dt);
}

// mean of squares
inline double signal_power(const Vec& x) {
    if (x.size() == 0) return 0.0;
    return x.squaredNorm() / static_cast<double>(x.size());
}

// Training diverged (non-finite loss); carries the offending epoch.
class divergence_error : public std::runtime_error {
public:
    divergence_error(const std::string& msg, int epoch)
        : std::runtime_error(msg), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

// Model/input shape mismatch (e.g. ortho matrix bound to a different N).
class shape_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rrcnn

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rrcnn/signal.hpp"

namespace rrcnn {

// Closed-form signal descriptor: a scalar function of time plus a printable
// name used in error messages and record metadata.
struct AnalyticSignal {
    std::string name;
    std::function<double(double)> fn;
};

// Samples expr on the closed interval [t0, t1] with N points (both endpoints
// included), dt = (t1 - t0) / (N - 1). Throws naming the offending t if the
// expression evaluates non-finite anywhere.
Signal sample_function(const AnalyticSignal& expr, double t0, double t1, Eigen::Index n);

// Adds i.i.d. zero-mean Gaussian noise with variance P_x / 10^(snr_db/10).
// Deterministic given the seed; rejects identically-zero input.
Signal add_gaussian_noise(const Signal& x, double snr_db, uint64_t seed);

// One dataset record: the input signal, the ordered true components used as
// labels, and the generator coordinates it came from.
struct SampleRecord {
    Signal input;
    std::vector<Signal> labels;
    std::string family_id;
    std::map<std::string, double> params;

    // input minus noise minus labels, i.e. the known trend term (zero for
    // product families where the whole signal is the labeled component).
    Signal clean_trend;
};

enum class Split { train, validation };

struct SampleSet {
    std::vector<SampleRecord> records;
    std::vector<Split> split; // aligned with records

    size_t count_split(Split s) const;
    std::vector<size_t> indices_of(Split s) const;
};

enum class TableId { T2, T6, T8, T10, T12 };

TableId table_id_from_string(const std::string& s);
std::string to_string(TableId t);

// Enumerates the full generator grid of one of the synthetic tables, applies
// per-record noise where the table calls for it (labels stay clean), and
// tags a deterministic 7:3 train/validation split.
SampleSet build_table_dataset(TableId table, Eigen::Index n, uint64_t seed);

// Deterministically shuffles record indices and tags the first
// round-half-up(ratio * count) of them as training records. Record order in
// the set itself is untouched.
void split_train_val(SampleSet& set, double ratio, uint64_t seed);

} // namespace rrcnn

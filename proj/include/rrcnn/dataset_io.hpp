#pragma once

#include <string>

#include "rrcnn/generators.hpp"

namespace rrcnn {

// Dataset on disk: one CSV per record (columns t, input, label_1..label_M;
// generator metadata as leading '#' comment lines) plus manifest.txt with
// table id, N, seed and the per-record split tags.
void export_dataset(const SampleSet& set, const std::string& dir, TableId table,
                    Eigen::Index n, uint64_t seed);

SampleSet import_dataset(const std::string& dir);

// Single-signal CSV used by the decompose command: either one value column
// or two columns t,value (a header line is skipped if non-numeric).
Signal read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const Signal& x);

} // namespace rrcnn

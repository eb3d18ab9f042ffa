#pragma once

#include <string>

#include "rrcnn/model.hpp"

namespace rrcnn {

// Portable weight file: a short text header (format version, M, per-block S
// and filter lengths, ortho flag) followed by raw little-endian 64-bit floats
// in declaration order (per block, per recursion: W1 then W2_raw; then the
// ortho matrix row-major).
void save_weights(const ModelParams& p, const std::string& path);
ModelParams load_weights(const std::string& path);

// Flat CSV of every filter tap for eyeballing trained models.
void export_filters_csv(const ModelParams& p, const std::string& path);

} // namespace rrcnn

#pragma once

#include <filesystem>

#include "glyphgrid/nn.hpp"

namespace glyphgrid {

// .scm model container: magic "GGSCM\n", u32 LE format version, u64 LE
// header length, a JSON header (architecture + training dataset hash +
// parameter count), then every parameter tensor as raw little-endian
// float64 in layer order (per block kernels then bias, dense weights, dense
// bias). Round-trips bit-exactly.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);  // throws IoError/ConfigError

}  // namespace glyphgrid

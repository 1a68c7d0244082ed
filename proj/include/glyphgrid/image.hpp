#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace glyphgrid {

// Single-channel 8-bit image, row-major. 0 is the black background;
// glyph coverage values run up to 255.
using ImageU8 = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace glyphgrid

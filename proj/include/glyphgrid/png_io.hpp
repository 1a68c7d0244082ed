#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "glyphgrid/image.hpp"

namespace glyphgrid {

// Lossless PNG encoding of a grayscale image. With rgb_triplicate the
// single channel is replicated into an 8-bit RGB image for tools that
// expect three channels; decode only supports the grayscale form.
std::vector<std::uint8_t> encode_png(const ImageU8& image, bool rgb_triplicate = false);

// Decodes an 8-bit grayscale, non-interlaced PNG. Throws IoError on
// anything else.
ImageU8 decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const ImageU8& image,
               bool rgb_triplicate = false);
ImageU8 read_png(const std::filesystem::path& path);

}  // namespace glyphgrid

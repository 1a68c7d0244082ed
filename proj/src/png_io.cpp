#include "glyphgrid/png_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "glyphgrid/errors.hpp"

namespace glyphgrid {

namespace {

constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  std::span<const std::uint8_t> payload) {
  put_be32(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const auto crc = crc32(0, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
  put_be32(out, static_cast<std::uint32_t>(crc));
}

std::vector<std::uint8_t> deflate_bytes(std::span<const std::uint8_t> raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> out(bound);
  if (compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw IoError("png: deflate failed");
  }
  out.resize(bound);
  return out;
}

std::vector<std::uint8_t> inflate_bytes(std::span<const std::uint8_t> compressed,
                                        std::size_t expected) {
  std::vector<std::uint8_t> out(expected);
  uLongf got = static_cast<uLongf>(expected);
  const int rc = uncompress(out.data(), &got, compressed.data(),
                            static_cast<uLong>(compressed.size()));
  if (rc != Z_OK || got != expected) throw IoError("png: inflate failed or size mismatch");
  return out;
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const ImageU8& image, bool rgb_triplicate) {
  const auto height = static_cast<std::uint32_t>(image.rows());
  const auto width = static_cast<std::uint32_t>(image.cols());
  if (height == 0 || width == 0) throw IoError("png: cannot encode empty image");
  const int channels = rgb_triplicate ? 3 : 1;

  // filter type 0 on every scanline keeps the output canonical
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(height) * (1 + width * channels));
  for (std::uint32_t y = 0; y < height; ++y) {
    raw.push_back(0);
    for (std::uint32_t x = 0; x < width; ++x) {
      const std::uint8_t v = image(y, x);
      for (int c = 0; c < channels; ++c) raw.push_back(v);
    }
  }

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kSignature, kSignature + 8);
  std::vector<std::uint8_t> ihdr;
  put_be32(ihdr, width);
  put_be32(ihdr, height);
  ihdr.push_back(8);                                  // bit depth
  ihdr.push_back(rgb_triplicate ? 2 : 0);             // color type
  ihdr.push_back(0);                                  // compression
  ihdr.push_back(0);                                  // filter method
  ihdr.push_back(0);                                  // no interlace
  append_chunk(out, "IHDR", ihdr);
  append_chunk(out, "IDAT", deflate_bytes(raw));
  append_chunk(out, "IEND", {});
  return out;
}

ImageU8 decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
    throw IoError("png: bad signature");
  }
  std::size_t pos = 8;
  std::uint32_t width = 0, height = 0;
  bool have_ihdr = false;
  std::vector<std::uint8_t> idat;
  while (pos + 12 <= bytes.size()) {
    const std::uint32_t len = get_be32(bytes.data() + pos);
    if (pos + 12 + len > bytes.size()) throw IoError("png: truncated chunk");
    const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
    const std::uint8_t* payload = bytes.data() + pos + 8;
    const std::uint32_t stored_crc = get_be32(bytes.data() + pos + 8 + len);
    const auto computed =
        crc32(0, bytes.data() + pos + 4, static_cast<uInt>(4 + len));
    if (stored_crc != static_cast<std::uint32_t>(computed)) throw IoError("png: bad chunk crc");
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw IoError("png: bad IHDR");
      width = get_be32(payload);
      height = get_be32(payload + 4);
      const int bit_depth = payload[8];
      const int color_type = payload[9];
      const int interlace = payload[12];
      if (bit_depth != 8 || color_type != 0) {
        throw IoError("png: only 8-bit grayscale supported");
      }
      if (interlace != 0) throw IoError("png: interlaced images not supported");
      have_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), payload, payload + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!have_ihdr || width == 0 || height == 0) throw IoError("png: missing image header");

  const std::size_t stride = width;  // one byte per pixel
  const std::vector<std::uint8_t> raw =
      inflate_bytes(idat, static_cast<std::size_t>(height) * (1 + stride));

  ImageU8 image(height, width);
  std::vector<std::uint8_t> prev(stride, 0);
  for (std::uint32_t y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[static_cast<std::size_t>(y) * (1 + stride)];
    const std::uint8_t* line = raw.data() + static_cast<std::size_t>(y) * (1 + stride) + 1;
    for (std::uint32_t x = 0; x < width; ++x) {
      const int left = x > 0 ? image(y, x - 1) : 0;
      const int up = prev[x];
      const int up_left = x > 0 ? prev[x - 1] : 0;
      int v = line[x];
      switch (filter) {
        case 0: break;
        case 1: v += left; break;
        case 2: v += up; break;
        case 3: v += (left + up) / 2; break;
        case 4: v += paeth(left, up, up_left); break;
        default: throw IoError("png: unknown filter type");
      }
      image(y, x) = static_cast<std::uint8_t>(v & 0xFF);
    }
    for (std::uint32_t x = 0; x < width; ++x) prev[x] = image(y, x);
  }
  return image;
}

void write_png(const std::filesystem::path& path, const ImageU8& image, bool rgb_triplicate) {
  const auto bytes = encode_png(image, rgb_triplicate);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

ImageU8 read_png(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return decode_png(bytes);
}

}  // namespace glyphgrid

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace glyphgrid {

// Incremental SHA-256 (FIPS 180-4). Used to fingerprint font files and
// layout configs so datasets and models can refuse mismatched inputs.
class Sha256 {
 public:
  Sha256();
  void update(std::span<const std::uint8_t> data);
  void update(std::string_view data);
  std::array<std::uint8_t, 32> finish();

  static std::string hex(std::span<const std::uint8_t> data);
  static std::string hex(std::string_view data);

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace glyphgrid

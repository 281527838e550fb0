#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rbepwt/codec.hpp"

namespace rbepwt {

// "RBE1" container, little-endian throughout:
//   magic "RBE1" | u8 version (1) | u8 mode | u8 bank | u8 flags | u16 width | u16 height
//   | u8 levels | u32 region_count | label RLE | [support RLE] | [gradients] | [permutations]
//   | u32 n_approx, f64... | per level (lowest first) u32 n_detail, f64... | u32 CRC-32
// An RLE block is u32 run_count followed by (u32 run_length, u32 value) pairs.
// flags bit 0: support mask present; bit 1: Chebyshev path distance.
inline constexpr std::uint8_t kContainerVersion = 1;

std::vector<std::uint8_t> serialize(const EncodedImage& enc);

// Throws Error{Format} with "bad magic", "version mismatch", "truncation",
// "checksum failure" or "corrupt stream" diagnostics.
EncodedImage deserialize(std::span<const std::uint8_t> bytes);

void save_encoded(const EncodedImage& enc, const std::filesystem::path& path);
EncodedImage load_encoded(const std::filesystem::path& path);

}  // namespace rbepwt

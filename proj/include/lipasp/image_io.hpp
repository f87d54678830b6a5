#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "lipasp/raster.hpp"

namespace lipasp {

using Bytes = std::vector<std::uint8_t>;

enum class PgmVariant { P2, P5 };

/// Decodes an ASCII (P2) or binary (P5) PGM stream. The returned image has
/// M = maxval + 1 and raw sample values as pixels. 16-bit P5 samples are
/// big-endian.
GreyImage read_pgm(std::span<const std::uint8_t> bytes);

/// Encodes with maxval = M - 1 (M must be an integer in [2, 65536]).
/// Pixels are rounded to nearest; anything outside [0, maxval] after
/// rounding is an EncodeError.
Bytes write_pgm(const GreyImage& image, PgmVariant variant);

// ASPF v1, little-endian:
//   "ASPF" | u32 version=1 | u32 width | u32 height | i32 origin_x | i32 origin_y
//   | u8 method (0 direct, 1 gradient) | 3 zero bytes | width*height f64, row-major
inline constexpr std::size_t kAspfHeaderSize = 28;
inline constexpr std::uint32_t kAspfVersion = 1;

Bytes write_map(const DistanceMap& map);
DistanceMap read_map(std::span<const std::uint8_t> bytes);

/// 8-bit preview: round(min(v, ceiling) / ceiling * 255); negatives map to 0.
GreyImage quantize_map(const DistanceMap& map, double ceiling);

/// Builds a probe from a PGM and an optional mask PGM of the same size
/// (nonzero = active). Without a mask every cell is active. Anchor is the
/// top-left cell.
StructuringFunction probe_from_pgm(const GreyImage& values,
                                   const std::optional<GreyImage>& mask = std::nullopt);

/// Same pairing for raw (sign-free) structuring functions used by the
/// morphology primitives.
AdditiveSF additive_sf_from_pgm(const GreyImage& values,
                                const std::optional<GreyImage>& mask = std::nullopt);

// Whole-file helpers; failures throw IoError.
Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace lipasp

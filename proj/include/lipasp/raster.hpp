#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lipasp/lip_scale.hpp"

namespace lipasp {

struct Coord {
  int x = 0;
  int y = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

enum class BorderPolicy { valid, replicate };

/// Real-valued 2-D raster without grey-scale semantics. Carries raw grey
/// data or any of the transformed planes (ln(1 - f/M), ln(-ln(1 - f/M)), ...).
struct RealPlane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  RealPlane() = default;
  RealPlane(int w, int h, double fill = 0.0);
  RealPlane(int w, int h, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double& at(int x, int y) { return values[index(x, y)]; }
  double at(int x, int y) const { return values[index(x, y)]; }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  friend bool operator==(const RealPlane&, const RealPlane&) = default;
};

/// Grey-level image f on a rectangular domain, with its LIP bound M.
struct GreyImage {
  int width = 0;
  int height = 0;
  LipScale scale;
  std::vector<double> pixels;

  GreyImage() = default;
  GreyImage(int w, int h, LipScale s, double fill = 0.0);
  GreyImage(int w, int h, LipScale s, std::vector<double> p);

  double& at(int x, int y) { return pixels[index(x, y)]; }
  double at(int x, int y) const { return pixels[index(x, y)]; }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  RealPlane plane() const { return RealPlane(width, height, pixels); }
};

/// Structuring function with real values of either sign, as consumed by
/// the additive and multiplicative dilations/erosions. Offsets of the
/// active cells are measured from `anchor`: cell (i, j) has offset
/// (i - anchor.x, j - anchor.y).
struct AdditiveSF {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> active;
  Coord anchor;

  AdditiveSF() = default;
  /// All cells active, anchor at the top-left.
  AdditiveSF(int w, int h, std::vector<double> v);
  AdditiveSF(int w, int h, std::vector<double> v, std::vector<std::uint8_t> mask,
             Coord anchor = {});

  static AdditiveSF flat(int w, int h, double value = 0.0);

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  bool is_active(int x, int y) const { return active[index(x, y)] != 0; }
  double value(int x, int y) const { return values[index(x, y)]; }

  /// Shape, mask length, at least one active cell, finite active values,
  /// anchor inside the rectangle. Throws ValidationError.
  void validate() const;
  /// All cells active.
  bool is_full_rectangle() const;
  /// All active values bit-equal.
  bool is_flat() const;

  friend bool operator==(const AdditiveSF&, const AdditiveSF&) = default;
};

/// The probe B on its support D_B, expressed in grey levels of scale M.
struct StructuringFunction {
  int width = 0;
  int height = 0;
  LipScale scale;
  std::vector<double> values;
  std::vector<std::uint8_t> active;
  Coord anchor;

  StructuringFunction() = default;
  StructuringFunction(int w, int h, LipScale s, std::vector<double> v);
  StructuringFunction(int w, int h, LipScale s, std::vector<double> v,
                      std::vector<std::uint8_t> mask);

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
  bool is_active(int x, int y) const { return active[index(x, y)] != 0; }
  double value(int x, int y) const { return values[index(x, y)]; }
  std::size_t active_count() const;

  /// Structural checks plus every active value in (0, M).
  void validate() const;
};

enum class MapMethod : std::uint8_t { direct = 0, gradient = 1 };

/// Map of Asplund distances on the valid region. Value (i, j) belongs to
/// the source image position origin + (i, j).
struct DistanceMap {
  int width = 0;
  int height = 0;
  Coord origin;
  std::vector<double> values;
  MapMethod method = MapMethod::direct;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

}  // namespace lipasp

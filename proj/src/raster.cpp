#include "lipasp/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "lipasp/errors.hpp"

namespace lipasp {

namespace {

std::size_t area(int w, int h) {
  if (w < 1 || h < 1) {
    throw SizeError("raster dimensions must be >= 1, got " + std::to_string(w) + "x" +
                    std::to_string(h));
  }
  return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
}

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw SizeError(std::string(what) + ": expected " + std::to_string(want) +
                    " values, got " + std::to_string(got));
  }
}

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

LipScale::LipScale(double bound) : bound_(bound) {
  if (!std::isfinite(bound) || bound <= 0.0) {
    throw DomainError("grey-scale bound M must be finite and > 0, got " +
                      std::to_string(bound));
  }
}

RealPlane::RealPlane(int w, int h, double fill)
    : width(w), height(h), values(area(w, h), fill) {}

RealPlane::RealPlane(int w, int h, std::vector<double> v)
    : width(w), height(h), values(std::move(v)) {
  check_length(values.size(), area(w, h), "plane");
}

GreyImage::GreyImage(int w, int h, LipScale s, double fill)
    : width(w), height(h), scale(s), pixels(area(w, h), fill) {}

GreyImage::GreyImage(int w, int h, LipScale s, std::vector<double> p)
    : width(w), height(h), scale(s), pixels(std::move(p)) {
  check_length(pixels.size(), area(w, h), "image");
}

AdditiveSF::AdditiveSF(int w, int h, std::vector<double> v)
    : width(w), height(h), values(std::move(v)), active(values.size(), 1) {
  check_length(values.size(), area(w, h), "structuring function");
}

AdditiveSF::AdditiveSF(int w, int h, std::vector<double> v, std::vector<std::uint8_t> mask,
                       Coord a)
    : width(w), height(h), values(std::move(v)), active(std::move(mask)), anchor(a) {
  check_length(values.size(), area(w, h), "structuring function");
  check_length(active.size(), area(w, h), "structuring function mask");
}

AdditiveSF AdditiveSF::flat(int w, int h, double value) {
  return AdditiveSF(w, h, std::vector<double>(area(w, h), value));
}

void AdditiveSF::validate() const {
  const std::size_t n = area(width, height);
  if (values.size() != n || active.size() != n) {
    throw ValidationError("structuring function: values/mask length does not match shape");
  }
  if (anchor.x < 0 || anchor.y < 0 || anchor.x >= width || anchor.y >= height) {
    throw ValidationError("structuring function: anchor outside the rectangle");
  }
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i] == 0) continue;
    any = true;
    if (!std::isfinite(values[i])) {
      throw ValidationError("structuring function: non-finite active value");
    }
  }
  if (!any) throw ValidationError("structuring function: no active cell");
}

bool AdditiveSF::is_full_rectangle() const {
  return std::all_of(active.begin(), active.end(), [](std::uint8_t a) { return a != 0; });
}

bool AdditiveSF::is_flat() const {
  bool seen = false;
  double first = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (active[i] == 0) continue;
    if (!seen) {
      first = values[i];
      seen = true;
    } else if (!same_bits(first, values[i])) {
      return false;
    }
  }
  return true;
}

StructuringFunction::StructuringFunction(int w, int h, LipScale s, std::vector<double> v)
    : width(w), height(h), scale(s), values(std::move(v)), active(values.size(), 1) {
  check_length(values.size(), area(w, h), "probe");
}

StructuringFunction::StructuringFunction(int w, int h, LipScale s, std::vector<double> v,
                                         std::vector<std::uint8_t> mask)
    : width(w), height(h), scale(s), values(std::move(v)), active(std::move(mask)) {
  check_length(values.size(), area(w, h), "probe");
  check_length(active.size(), area(w, h), "probe mask");
}

std::size_t StructuringFunction::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(active.begin(), active.end(), [](std::uint8_t a) { return a != 0; }));
}

void StructuringFunction::validate() const {
  const std::size_t n = area(width, height);
  if (values.size() != n || active.size() != n) {
    throw ValidationError("probe: values/mask length does not match shape");
  }
  if (anchor.x < 0 || anchor.y < 0 || anchor.x >= width || anchor.y >= height) {
    throw ValidationError("probe: anchor outside the rectangle");
  }
  if (active_count() == 0) throw ValidationError("probe: no active cell");
  const double m = scale.bound();
  for (std::size_t i = 0; i < n; ++i) {
    if (active[i] == 0) continue;
    const double v = values[i];
    if (!(v > 0.0 && v < m)) {
      throw ValidationError("probe: active value " + std::to_string(v) + " at (" +
                            std::to_string(i % static_cast<std::size_t>(width)) + "," +
                            std::to_string(i / static_cast<std::size_t>(width)) +
                            ") outside (0, M)");
    }
  }
}

}  // namespace lipasp

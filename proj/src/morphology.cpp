#include "lipasp/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipasp/errors.hpp"
#include "plane_ops.hpp"

namespace lipasp {

namespace internal {

Padding dilation_padding(int w, int h, Coord a) {
  return {w - 1 - a.x, a.x, h - 1 - a.y, a.y};
}

Padding erosion_padding(int w, int h, Coord a) {
  return {a.x, w - 1 - a.x, a.y, h - 1 - a.y};
}

RealPlane pad_plane(const RealPlane& plane, const Padding& pad, std::optional<double> constant) {
  const int w = plane.width + pad.left + pad.right;
  const int h = plane.height + pad.top + pad.bottom;
  RealPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = y - pad.top;
    const bool row_inside = sy >= 0 && sy < plane.height;
    const int cy = std::clamp(sy, 0, plane.height - 1);
    for (int x = 0; x < w; ++x) {
      const int sx = x - pad.left;
      const bool inside = row_inside && sx >= 0 && sx < plane.width;
      if (!inside && constant) {
        out.at(x, y) = *constant;
      } else {
        out.at(x, y) = plane.at(std::clamp(sx, 0, plane.width - 1), cy);
      }
    }
  }
  return out;
}

void require_fits(const RealPlane& plane, int w, int h, const char* what) {
  if (w > plane.width || h > plane.height) {
    throw SizeError(std::string(what) + ": " + std::to_string(w) + "x" + std::to_string(h) +
                    " window does not fit in " + std::to_string(plane.width) + "x" +
                    std::to_string(plane.height) + " plane (valid mode)");
  }
}

}  // namespace internal

namespace {

using internal::Padding;

// out(o) reduces combine(plane(o + d), value) over all taps.
struct Tap {
  int dx;
  int dy;
  double value;
};

enum class Op { dilation, erosion };

std::vector<Tap> taps_of(const AdditiveSF& sf, Op op) {
  std::vector<Tap> taps;
  for (int j = 0; j < sf.height; ++j) {
    for (int i = 0; i < sf.width; ++i) {
      if (!sf.is_active(i, j)) continue;
      if (op == Op::dilation) {
        taps.push_back({sf.width - 1 - i, sf.height - 1 - j, sf.value(i, j)});
      } else {
        taps.push_back({i, j, sf.value(i, j)});
      }
    }
  }
  return taps;
}

template <class Combine, class Prefer>
RealPlane scan_valid(const RealPlane& plane, int out_w, int out_h, const std::vector<Tap>& taps,
                     Combine combine, Prefer prefer) {
  RealPlane out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    double* acc = &out.values[out.index(0, y)];
    bool first = true;
    for (const Tap& t : taps) {
      const double* src = &plane.values[plane.index(t.dx, y + t.dy)];
      const double v = t.value;
      if (first) {
        for (int x = 0; x < out_w; ++x) acc[x] = combine(src[x], v);
        first = false;
        continue;
      }
      for (int x = 0; x < out_w; ++x) {
        const double c = combine(src[x], v);
        acc[x] = prefer(c, acc[x]) ? c : acc[x];
      }
    }
  }
  return out;
}

template <class Combine, class Prefer>
RealPlane run_naive(const RealPlane& plane, const AdditiveSF& sf, Op op, BorderPolicy border,
                    std::optional<double> pad_value, Combine combine, Prefer prefer,
                    const char* what) {
  sf.validate();
  const auto taps = taps_of(sf, op);
  if (border == BorderPolicy::valid && !pad_value) {
    internal::require_fits(plane, sf.width, sf.height, what);
    return scan_valid(plane, plane.width - sf.width + 1, plane.height - sf.height + 1, taps,
                      combine, prefer);
  }
  const Padding pad = op == Op::dilation
                          ? internal::dilation_padding(sf.width, sf.height, sf.anchor)
                          : internal::erosion_padding(sf.width, sf.height, sf.anchor);
  const RealPlane padded = internal::pad_plane(plane, pad, pad_value);
  return scan_valid(padded, plane.width, plane.height, taps, combine, prefer);
}

constexpr auto kGreater = [](double a, double b) { return a > b; };
constexpr auto kLess = [](double a, double b) { return a < b; };
constexpr auto kPlus = [](double a, double b) { return a + b; };
constexpr auto kMinus = [](double a, double b) { return a - b; };
constexpr auto kTimes = [](double a, double b) { return a * b; };
constexpr auto kDivide = [](double a, double b) { return a / b; };

bool use_fast(const AdditiveSF& sf, MorphEngine engine) {
  const bool eligible = sf.is_full_rectangle() && sf.is_flat();
  if (engine == MorphEngine::fast && !eligible) {
    throw ValidationError("fast engine requires a flat full-rectangle structuring function");
  }
  return engine != MorphEngine::naive && eligible;
}

void require_positive(const RealPlane& plane, const AdditiveSF& sf, const char* what) {
  for (std::size_t i = 0; i < plane.values.size(); ++i) {
    if (!(plane.values[i] > 0.0)) {
      const auto w = static_cast<std::size_t>(plane.width);
      throw DomainError(std::string(what) + ": non-positive input " +
                        std::to_string(plane.values[i]) + " at (" + std::to_string(i % w) +
                        "," + std::to_string(i / w) + ")");
    }
  }
  for (std::size_t i = 0; i < sf.values.size(); ++i) {
    if (sf.active[i] != 0 && !(sf.values[i] > 0.0)) {
      throw DomainError(std::string(what) + ": non-positive structuring value " +
                        std::to_string(sf.values[i]));
    }
  }
}

}  // namespace

RealPlane dilate_add(const RealPlane& plane, const AdditiveSF& sf, BorderPolicy border,
                     MorphEngine engine) {
  sf.validate();
  if (use_fast(sf, engine)) {
    RealPlane out =
        sliding_extremum_flat(plane, sf.width, sf.height, ExtremumKind::max, border, sf.anchor);
    const double c = sf.values.front();
    for (double& v : out.values) v = v + c;
    return out;
  }
  return run_naive(plane, sf, Op::dilation, border, std::nullopt, kPlus, kGreater,
                   "dilate_add");
}

RealPlane erode_add(const RealPlane& plane, const AdditiveSF& sf, BorderPolicy border,
                    MorphEngine engine) {
  sf.validate();
  if (use_fast(sf, engine)) {
    RealPlane out =
        sliding_extremum_flat(plane, sf.width, sf.height, ExtremumKind::min, border, sf.anchor);
    const double c = sf.values.front();
    for (double& v : out.values) v = v - c;
    return out;
  }
  return run_naive(plane, sf, Op::erosion, border, std::nullopt, kMinus, kLess, "erode_add");
}

RealPlane dilate_mult(const RealPlane& plane, const AdditiveSF& sf, BorderPolicy border) {
  sf.validate();
  require_positive(plane, sf, "dilate_mult");
  return run_naive(plane, sf, Op::dilation, border, std::nullopt, kTimes, kGreater,
                   "dilate_mult");
}

RealPlane erode_mult(const RealPlane& plane, const AdditiveSF& sf, BorderPolicy border) {
  sf.validate();
  require_positive(plane, sf, "erode_mult");
  return run_naive(plane, sf, Op::erosion, border, std::nullopt, kDivide, kLess, "erode_mult");
}

AdditiveSF reflect(const AdditiveSF& sf) {
  AdditiveSF out = sf;
  for (int j = 0; j < sf.height; ++j) {
    for (int i = 0; i < sf.width; ++i) {
      const auto dst = out.index(sf.width - 1 - i, sf.height - 1 - j);
      out.values[dst] = sf.value(i, j);
      out.active[dst] = sf.active[sf.index(i, j)];
    }
  }
  out.anchor = {sf.width - 1 - sf.anchor.x, sf.height - 1 - sf.anchor.y};
  return out;
}

AdditiveSF negate(const AdditiveSF& sf) {
  AdditiveSF out = sf;
  for (double& v : out.values) v = -v;
  return out;
}

Coord dilation_valid_origin(const AdditiveSF& sf) {
  return {sf.width - 1 - sf.anchor.x, sf.height - 1 - sf.anchor.y};
}

Coord erosion_valid_origin(const AdditiveSF& sf) { return sf.anchor; }

namespace detail {

RealPlane dilate_add_padded(const RealPlane& plane, const AdditiveSF& sf, double pad) {
  return run_naive(plane, sf, Op::dilation, BorderPolicy::replicate, pad, kPlus, kGreater,
                   "dilate_add_padded");
}

RealPlane erode_add_padded(const RealPlane& plane, const AdditiveSF& sf, double pad) {
  return run_naive(plane, sf, Op::erosion, BorderPolicy::replicate, pad, kMinus, kLess,
                   "erode_add_padded");
}

}  // namespace detail

}  // namespace lipasp

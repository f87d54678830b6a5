#pragma once

// Random generators and brute-force reference implementations used by the
// unit and acceptance suites. The references follow the textbook
// definitions pixel by pixel and share no code with the library engines.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "lipasp/raster.hpp"

namespace lipasp::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline GreyImage random_grey_image(Rng& rng, int w, int h, int lo = 1, int hi = 255,
                                   double m = 256.0) {
  GreyImage img(w, h, LipScale(m));
  for (double& v : img.pixels) v = rng.uniform_int(lo, hi);
  return img;
}

/// Random probe; with `masked` about a third of the cells are inactive
/// (at least one stays active).
inline StructuringFunction random_probe(Rng& rng, int w, int h, bool masked = false,
                                        double m = 256.0) {
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (double& v : values) v = rng.uniform_int(1, static_cast<int>(m) - 1);
  std::vector<std::uint8_t> active(values.size(), 1);
  if (masked) {
    for (auto& a : active) a = rng.coin(0.66) ? 1 : 0;
    active[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(active.size()) - 1))] = 1;
  }
  return StructuringFunction(w, h, LipScale(m), std::move(values), std::move(active));
}

inline RealPlane random_plane(Rng& rng, int w, int h, double lo = -100.0, double hi = 100.0) {
  RealPlane p(w, h);
  for (double& v : p.values) v = rng.uniform(lo, hi);
  return p;
}

inline RealPlane random_int_plane(Rng& rng, int w, int h, int lo = -50, int hi = 50) {
  RealPlane p(w, h);
  for (double& v : p.values) v = rng.uniform_int(lo, hi);
  return p;
}

/// Integer-valued sf with random mask and anchor.
inline AdditiveSF random_int_sf(Rng& rng, int max_w, int max_h, int lo = -5, int hi = 5) {
  const int w = rng.uniform_int(1, max_w);
  const int h = rng.uniform_int(1, max_h);
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (double& v : values) v = rng.uniform_int(lo, hi);
  std::vector<std::uint8_t> active(values.size());
  for (auto& a : active) a = rng.coin(0.7) ? 1 : 0;
  active[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(active.size()) - 1))] = 1;
  const Coord anchor{rng.uniform_int(0, w - 1), rng.uniform_int(0, h - 1)};
  return AdditiveSF(w, h, std::move(values), std::move(active), anchor);
}

inline bool bit_identical(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Reference morphology: loop over output x, then over every active offset h,
// evaluating the definition with explicit coordinates.

enum class RefBorder { valid, replicate };

struct RefResult {
  RealPlane plane;
  Coord origin;  // input-frame position of output (0, 0)
};

template <class Combine, class Better>
RefResult reference_morph(const RealPlane& f, const AdditiveSF& b, RefBorder border, int sign,
                          Combine combine, Better better) {
  // sign = -1: sample f(x - h) (dilation); sign = +1: sample f(x + h) (erosion).
  struct Off {
    int hx, hy;
    double v;
  };
  std::vector<Off> offs;
  for (int j = 0; j < b.height; ++j)
    for (int i = 0; i < b.width; ++i)
      if (b.is_active(i, j)) offs.push_back({i - b.anchor.x, j - b.anchor.y, b.value(i, j)});

  // Valid region from the full rectangle of offsets.
  const int hx_min = -b.anchor.x, hx_max = b.width - 1 - b.anchor.x;
  const int hy_min = -b.anchor.y, hy_max = b.height - 1 - b.anchor.y;
  int x0 = 0, x1 = f.width - 1, y0 = 0, y1 = f.height - 1;
  if (border == RefBorder::valid) {
    if (sign < 0) {
      x0 = hx_max; x1 = f.width - 1 + hx_min;
      y0 = hy_max; y1 = f.height - 1 + hy_min;
    } else {
      x0 = -hx_min; x1 = f.width - 1 - hx_max;
      y0 = -hy_min; y1 = f.height - 1 - hy_max;
    }
  }
  RefResult r{RealPlane(x1 - x0 + 1, y1 - y0 + 1), {x0, y0}};
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      bool first = true;
      double acc = 0.0;
      for (const Off& o : offs) {
        const int sx = std::clamp(x + sign * o.hx, 0, f.width - 1);
        const int sy = std::clamp(y + sign * o.hy, 0, f.height - 1);
        const double c = combine(f.at(sx, sy), o.v);
        if (first || better(c, acc)) acc = c;
        first = false;
      }
      r.plane.at(x - x0, y - y0) = acc;
    }
  }
  return r;
}

inline RefResult ref_dilate_add(const RealPlane& f, const AdditiveSF& b, RefBorder border) {
  return reference_morph(f, b, border, -1, [](double a, double v) { return a + v; },
                         [](double c, double acc) { return c > acc; });
}
inline RefResult ref_erode_add(const RealPlane& f, const AdditiveSF& b, RefBorder border) {
  return reference_morph(f, b, border, +1, [](double a, double v) { return a - v; },
                         [](double c, double acc) { return c < acc; });
}
inline RefResult ref_dilate_mult(const RealPlane& f, const AdditiveSF& b, RefBorder border) {
  return reference_morph(f, b, border, -1, [](double a, double v) { return a * v; },
                         [](double c, double acc) { return c > acc; });
}
inline RefResult ref_erode_mult(const RealPlane& f, const AdditiveSF& b, RefBorder border) {
  return reference_morph(f, b, border, +1, [](double a, double v) { return a / v; },
                         [](double c, double acc) { return c < acc; });
}

// ---------------------------------------------------------------------------
// Reference Asplund map in extended precision, straight from the ratio
// definition with ln(1 - f/M) evaluated by std::log on long double.

struct RefLambdaMu {
  std::vector<long double> lambda, mu;
  int width = 0, height = 0;
};

inline RefLambdaMu ref_lambda_mu(const GreyImage& f, const StructuringFunction& b) {
  RefLambdaMu r;
  r.width = f.width - b.width + 1;
  r.height = f.height - b.height + 1;
  const long double m = f.scale.bound();
  auto t = [m](double v) { return std::log(1.0L - static_cast<long double>(v) / m); };
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      long double lo = std::numeric_limits<long double>::infinity();
      long double hi = -lo;
      for (int j = 0; j < b.height; ++j) {
        for (int i = 0; i < b.width; ++i) {
          if (!b.is_active(i, j)) continue;
          const long double q = t(f.at(x + i, y + j)) / t(b.value(i, j));
          lo = std::min(lo, q);
          hi = std::max(hi, q);
        }
      }
      r.lambda.push_back(hi);
      r.mu.push_back(lo);
    }
  }
  return r;
}

inline std::vector<double> ref_asplund(const GreyImage& f, const StructuringFunction& b) {
  const auto lm = ref_lambda_mu(f, b);
  std::vector<double> out(lm.lambda.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(std::log(lm.lambda[i] / lm.mu[i]));
  }
  return out;
}

}  // namespace lipasp::testing

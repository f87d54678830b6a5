// van Herk / Gil-Werman sliding max/min.
//
// The sequence is cut into blocks of length k. Within each block we keep a
// forward running extremum g and a backward running extremum h; a window
// [o, o + k) straddles at most two blocks, so its extremum is
// ext(h[o], g[o + k - 1]). Three comparisons per sample regardless of k.

#include <algorithm>
#include <vector>

#include "lipasp/errors.hpp"
#include "lipasp/morphology.hpp"
#include "plane_ops.hpp"

namespace lipasp {

namespace {

struct TakeMax {
  double operator()(double a, double b) const { return b > a ? b : a; }
};
struct TakeMin {
  double operator()(double a, double b) const { return b < a ? b : a; }
};

// Horizontal pass: each row of `in` (width n) -> row of width n - k + 1.
template <class Ext>
RealPlane rows_pass(const RealPlane& in, int k, Ext ext) {
  const int n = in.width;
  const int m = n - k + 1;
  RealPlane out(m, in.height);
  if (k == 1) {
    out.values = in.values;
    return out;
  }
  std::vector<double> g(static_cast<std::size_t>(n));
  std::vector<double> h(static_cast<std::size_t>(n));
  for (int y = 0; y < in.height; ++y) {
    const double* src = &in.values[in.index(0, y)];
    double* dst = &out.values[out.index(0, y)];
    for (int i = 0; i < n; ++i) {
      g[i] = (i % k == 0) ? src[i] : ext(g[i - 1], src[i]);
    }
    for (int i = n - 1; i >= 0; --i) {
      h[i] = (i == n - 1 || (i + 1) % k == 0) ? src[i] : ext(h[i + 1], src[i]);
    }
    for (int o = 0; o < m; ++o) dst[o] = ext(h[o], g[o + k - 1]);
  }
  return out;
}

// Vertical pass, vectorised over whole rows for cache locality.
template <class Ext>
RealPlane cols_pass(const RealPlane& in, int k, Ext ext) {
  const int n = in.height;
  const int m = n - k + 1;
  const int w = in.width;
  RealPlane out(w, m);
  if (k == 1) {
    out.values = in.values;
    return out;
  }
  RealPlane g(w, n);
  RealPlane h(w, n);
  for (int y = 0; y < n; ++y) {
    const double* src = &in.values[in.index(0, y)];
    double* gy = &g.values[g.index(0, y)];
    if (y % k == 0) {
      std::copy(src, src + w, gy);
    } else {
      const double* prev = &g.values[g.index(0, y - 1)];
      for (int x = 0; x < w; ++x) gy[x] = ext(prev[x], src[x]);
    }
  }
  for (int y = n - 1; y >= 0; --y) {
    const double* src = &in.values[in.index(0, y)];
    double* hy = &h.values[h.index(0, y)];
    if (y == n - 1 || (y + 1) % k == 0) {
      std::copy(src, src + w, hy);
    } else {
      const double* next = &h.values[h.index(0, y + 1)];
      for (int x = 0; x < w; ++x) hy[x] = ext(next[x], src[x]);
    }
  }
  for (int o = 0; o < m; ++o) {
    const double* ho = &h.values[h.index(0, o)];
    const double* go = &g.values[g.index(0, o + k - 1)];
    double* dst = &out.values[out.index(0, o)];
    for (int x = 0; x < w; ++x) dst[x] = ext(ho[x], go[x]);
  }
  return out;
}

template <class Ext>
RealPlane separable(const RealPlane& plane, int ww, int wh, Ext ext) {
  return cols_pass(rows_pass(plane, ww, ext), wh, ext);
}

}  // namespace

RealPlane sliding_extremum_flat(const RealPlane& plane, int window_w, int window_h,
                                ExtremumKind kind, BorderPolicy border, Coord anchor) {
  if (window_w < 1 || window_h < 1) {
    throw SizeError("sliding_extremum_flat: window dimensions must be >= 1");
  }
  if (anchor.x < 0 || anchor.y < 0 || anchor.x >= window_w || anchor.y >= window_h) {
    throw ValidationError("sliding_extremum_flat: anchor outside the window");
  }
  const auto run = [&](const RealPlane& p) {
    return kind == ExtremumKind::max ? separable(p, window_w, window_h, TakeMax{})
                                     : separable(p, window_w, window_h, TakeMin{});
  };
  if (border == BorderPolicy::valid) {
    internal::require_fits(plane, window_w, window_h, "sliding_extremum_flat");
    return run(plane);
  }
  const auto pad = kind == ExtremumKind::max
                       ? internal::dilation_padding(window_w, window_h, anchor)
                       : internal::erosion_padding(window_w, window_h, anchor);
  return run(internal::pad_plane(plane, pad));
}

}  // namespace lipasp

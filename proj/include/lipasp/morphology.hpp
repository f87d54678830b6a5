#pragma once

// Grey-scale dilation and erosion over real-valued planes.
//
//   additive:        dilate(f)(x) = max_h f(x - h) + B(h)
//                    erode(f)(x)  = min_h f(x + h) - B(h)
//   multiplicative:  dilate(f)(x) = max_h f(x - h) * B(h)
//                    erode(f)(x)  = min_h f(x + h) / B(h)
//
// h ranges over the active cells of the structuring function, measured
// from its anchor.
//
// Border handling:
//   valid      output covers only positions whose whole neighbourhood lies
//              inside the plane; output (0, 0) sits at dilation_valid_origin()
//              resp. erosion_valid_origin() in the input frame. Both origins
//              coincide for erode(f, B) and dilate(f, reflect(B)).
//   replicate  output has the input size; samples outside the plane take the
//              value of the nearest edge pixel.

#include "lipasp/raster.hpp"

namespace lipasp {

enum class MorphEngine {
  automatic,  // fast engine for flat full-rectangle sfs, naive otherwise
  naive,      // exhaustive scan of the structuring function
  fast,       // van Herk / Gil-Werman; requires a flat full-rectangle sf
};

enum class ExtremumKind { max, min };

RealPlane dilate_add(const RealPlane& plane, const AdditiveSF& sf, BorderPolicy border,
                     MorphEngine engine = MorphEngine::automatic);
RealPlane erode_add(const RealPlane& plane, const AdditiveSF& sf, BorderPolicy border,
                    MorphEngine engine = MorphEngine::automatic);

/// Plane and active sf values must be strictly positive (DomainError otherwise).
RealPlane dilate_mult(const RealPlane& plane, const AdditiveSF& sf, BorderPolicy border);
RealPlane erode_mult(const RealPlane& plane, const AdditiveSF& sf, BorderPolicy border);

/// Point reflection through the anchor: B'(h) = B(-h).
AdditiveSF reflect(const AdditiveSF& sf);
/// B'(h) = -B(h); mask and anchor unchanged.
AdditiveSF negate(const AdditiveSF& sf);

/// Input-frame position of output (0, 0) in valid mode.
Coord dilation_valid_origin(const AdditiveSF& sf);
Coord erosion_valid_origin(const AdditiveSF& sf);

/// Max or min over a window_w x window_h rectangle, separable (rows then
/// columns) with a constant number of comparisons per sample whatever the
/// window size. Window placement matches dilate_add (kind == max) or
/// erode_add (kind == min) with an all-zero rectangular sf anchored at
/// `anchor`; the results are bit-identical to the naive engine.
RealPlane sliding_extremum_flat(const RealPlane& plane, int window_w, int window_h,
                                ExtremumKind kind, BorderPolicy border, Coord anchor = {});

namespace detail {

// Full-size additive dilation/erosion where out-of-plane samples take the
// constant `pad`. With pad = -inf (dilation) and +inf (erosion) this is the
// complete-lattice convention under which the pair is an exact adjunction.
RealPlane dilate_add_padded(const RealPlane& plane, const AdditiveSF& sf, double pad);
RealPlane erode_add_padded(const RealPlane& plane, const AdditiveSF& sf, double pad);

}  // namespace detail

}  // namespace lipasp

#pragma once

// Map of Asplund distances under the LIP multiplication.
//
// For each position x where the probe B fits inside the image f,
//
//   lambda(x) = max_h tilde(f(x + h)) / tilde(B(h))
//   mu(x)     = min_h tilde(f(x + h)) / tilde(B(h))
//   As(x)     = ln(lambda(x) / mu(x))
//
// lambda and mu are the tightest LIP factors with mu (x) B <= f <= lambda (x) B
// on the window, so As is invariant to LIP-multiplying either f or B.
//
// With hat(f) = ln(-tilde(f)) the ratio turns into a difference and
//
//   As(x) = max_h (hat f(x + h) - hat B(h)) - min_h (hat f(x + h) - hat B(h))
//         = dilate_add(hat f, -reflect(hat B)) - erode_add(hat f, hat B),
//
// a morphological gradient. asplund_direct() evaluates the first form,
// asplund_gradient() the second; for a flat probe the gradient reduces to
// the local range of hat f and runs in constant time per pixel.

#include <cstddef>
#include <optional>
#include <vector>

#include "lipasp/lip_core.hpp"
#include "lipasp/morphology.hpp"
#include "lipasp/raster.hpp"

namespace lipasp {

enum class AsplundMethod { direct, gradient, both };

/// Maximum |direct - gradient| accepted by AsplundMethod::both.
inline constexpr double kEquivalenceTolerance = 1e-9;

struct AsplundRequest {
  GreyImage image;
  StructuringFunction probe;
  AsplundMethod method = AsplundMethod::both;
  BorderPolicy border = BorderPolicy::valid;  // only valid is supported
  SanitationPolicy sanitation;
};

struct LambdaMuPair {
  RealPlane lambda_plane;
  RealPlane mu_plane;
};

// The following take already sanitized inputs (grey levels in (0, M)) and
// produce planes over the valid region; output (0, 0) is image position
// probe.anchor.
RealPlane lambda_map(const GreyImage& image, const StructuringFunction& probe);
RealPlane mu_map(const GreyImage& image, const StructuringFunction& probe);
/// Both extrema in one scan.
LambdaMuPair lambda_mu(const GreyImage& image, const StructuringFunction& probe);

/// Alternative evaluations of lambda kept to cross-check the algebra:
///   via_mult  dilate_mult(-tilde f, reflect(-1 / tilde B))
///   via_hat   exp(dilate_add(hat f, negate(reflect(hat B))))
struct ExtremumPaths {
  RealPlane via_mult;
  RealPlane via_hat;
};
ExtremumPaths lambda_via_mult_dilation(const GreyImage& image, const StructuringFunction& probe);
///   via_mult  erode_mult(-tilde f, -tilde B)
///   via_hat   exp(erode_add(hat f, hat B))
ExtremumPaths mu_via_mult_erosion(const GreyImage& image, const StructuringFunction& probe);

/// Sanitizes, validates and evaluates ln(lambda / mu).
DistanceMap asplund_direct(const AsplundRequest& request);
/// Sanitizes, validates and evaluates the dilation-minus-erosion form.
/// `engine` picks the morphology engine; automatic uses the sliding
/// extremum filter whenever the probe is a flat full rectangle.
DistanceMap asplund_gradient(const AsplundRequest& request,
                             MorphEngine engine = MorphEngine::automatic);

struct AsplundResult {
  DistanceMap map;
  std::size_t clamped_pixels = 0;  // image + probe
  std::optional<double> max_discrepancy;
};

/// Dispatches on request.method. For `both`, computes the two forms,
/// throws EquivalenceError when they differ by more than
/// kEquivalenceTolerance, and returns the gradient map.
AsplundResult compute_asplund(const AsplundRequest& request);

/// max |a - b| over two maps of identical geometry.
double max_abs_difference(const DistanceMap& a, const DistanceMap& b);

struct Match {
  int x = 0;
  int y = 0;
  double value = 0.0;
  friend bool operator==(const Match&, const Match&) = default;
};

/// Positions (image frame) whose distance is <= threshold, ascending by
/// distance, ties in raster order. threshold must be >= 0.
std::vector<Match> match_threshold(const DistanceMap& map, double threshold);

}  // namespace lipasp

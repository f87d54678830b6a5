#pragma once

// Logarithmic Image Processing (LIP) grey-scale model.
//
// Grey levels f live in the open interval (0, M). The isomorphism
//   tilde(f) = ln(1 - f/M)          (strictly negative)
// turns the LIP scalar multiplication into ordinary scaling, and
//   hat(f) = ln(-tilde(f))
// turns ratios of tilde values into differences, which is what lets the
// Asplund map be written as a morphological gradient.

#include <cstddef>
#include <optional>

#include "lipasp/lip_scale.hpp"
#include "lipasp/raster.hpp"

namespace lipasp {

double tilde(double value, const LipScale& scale);
double tilde_inv(double t, const LipScale& scale);
double hat(double value, const LipScale& scale);

/// alpha (x) f = M - M (1 - f/M)^alpha, so that tilde(alpha (x) f) = alpha * tilde(f).
double lip_mul(double alpha, double value, const LipScale& scale);

/// f (+) g = f + g - f g / M. Not used by the distance-map paths.
double lip_add(double f, double g, const LipScale& scale);

/// LIP multiplication applied pixelwise. Accepts the closed interval [0, M]
/// (both endpoints are fixed points) so that raw 8-bit data with black
/// pixels can be rescaled without sanitation.
GreyImage lip_mul(double alpha, const GreyImage& image);

/// LIP multiplication of the active probe values.
StructuringFunction lip_mul(double alpha, const StructuringFunction& probe);

enum class SanitationMode { clamp, strict };

struct SanitationPolicy {
  SanitationMode mode = SanitationMode::clamp;
  std::optional<double> clamp_low;   // defaults to 1
  std::optional<double> clamp_high;  // defaults to M - 1

  static SanitationPolicy clamp() { return {}; }
  static SanitationPolicy strict() { return {SanitationMode::strict, {}, {}}; }

  double low(const LipScale& scale) const;
  double high(const LipScale& scale) const;
  /// Throws ValidationError unless 0 < low <= high < M.
  void validate(const LipScale& scale) const;
};

template <class Raster>
struct Sanitized {
  Raster value;
  std::size_t clamped_count = 0;
};

/// Brings every grey level into (0, M). Clamp mode moves out-of-range
/// values to [clamp_low, clamp_high] and counts them; strict mode rejects
/// the first value outside (0, M). NaN/inf is rejected in both modes.
Sanitized<GreyImage> sanitize(const GreyImage& image, const SanitationPolicy& policy);
/// Same, over the active cells of a probe.
Sanitized<StructuringFunction> sanitize(const StructuringFunction& probe,
                                        const SanitationPolicy& policy);

// Pixelwise transforms of sanitized data.
RealPlane tilde_plane(const GreyImage& image);
RealPlane hat_plane(const GreyImage& image);
/// Inactive cells keep value 0 and stay inactive.
AdditiveSF tilde_sf(const StructuringFunction& probe);
AdditiveSF hat_sf(const StructuringFunction& probe);

}  // namespace lipasp

#include "lipasp/lip_core.hpp"

#include <cmath>
#include <string>

#include "lipasp/errors.hpp"

namespace lipasp {

namespace {

void require_grey(double value, const LipScale& scale, const char* fn) {
  if (!(value > 0.0 && value < scale.bound())) {
    throw DomainError(std::string(fn) + ": grey level " + std::to_string(value) +
                      " outside (0, " + std::to_string(scale.bound()) + ")");
  }
}

std::string coord_text(std::size_t i, int width) {
  const auto w = static_cast<std::size_t>(width);
  return "(" + std::to_string(i % w) + "," + std::to_string(i / w) + ")";
}

// Shared by image and probe sanitation; `skip` masks cells that are ignored.
template <class Skip>
std::size_t sanitize_values(std::vector<double>& values, int width, const LipScale& scale,
                            const SanitationPolicy& policy, Skip skip) {
  policy.validate(scale);
  const double m = scale.bound();
  const double lo = policy.low(scale);
  const double hi = policy.high(scale);
  std::size_t count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (skip(i)) continue;
    double& v = values[i];
    if (!std::isfinite(v)) {
      throw ValidationError("non-finite grey level at " + coord_text(i, width));
    }
    if (policy.mode == SanitationMode::strict) {
      if (!(v > 0.0 && v < m)) {
        throw ValidationError("grey level " + std::to_string(v) + " at " +
                              coord_text(i, width) + " outside (0, M); strict mode");
      }
      continue;
    }
    if (v < lo) {
      v = lo;
      ++count;
    } else if (v > hi) {
      v = hi;
      ++count;
    }
  }
  return count;
}

}  // namespace

double tilde(double value, const LipScale& scale) {
  require_grey(value, scale, "tilde");
  // log1p keeps full relative precision for small f/M.
  return std::log1p(-value / scale.bound());
}

double tilde_inv(double t, const LipScale& scale) {
  if (!(t <= 0.0)) {
    throw DomainError("tilde_inv: argument must be <= 0, got " + std::to_string(t));
  }
  return -scale.bound() * std::expm1(t);
}

double hat(double value, const LipScale& scale) { return std::log(-tilde(value, scale)); }

double lip_mul(double alpha, double value, const LipScale& scale) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("lip_mul: alpha must be finite and > 0, got " + std::to_string(alpha));
  }
  return tilde_inv(alpha * tilde(value, scale), scale);
}

double lip_add(double f, double g, const LipScale& scale) {
  return f + g - f * g / scale.bound();
}

GreyImage lip_mul(double alpha, const GreyImage& image) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError("lip_mul: alpha must be finite and > 0, got " + std::to_string(alpha));
  }
  const double m = image.scale.bound();
  GreyImage out = image;
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const double v = out.pixels[i];
    if (!(v >= 0.0 && v <= m)) {
      throw DomainError("lip_mul: grey level " + std::to_string(v) + " at " +
                        coord_text(i, image.width) + " outside [0, M]");
    }
    if (v == 0.0 || v == m) continue;
    out.pixels[i] = -m * std::expm1(alpha * std::log1p(-v / m));
  }
  return out;
}

StructuringFunction lip_mul(double alpha, const StructuringFunction& probe) {
  StructuringFunction out = probe;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.active[i] != 0) out.values[i] = lip_mul(alpha, out.values[i], out.scale);
  }
  return out;
}

double SanitationPolicy::low(const LipScale&) const { return clamp_low.value_or(1.0); }

double SanitationPolicy::high(const LipScale& scale) const {
  return clamp_high.value_or(scale.bound() - 1.0);
}

void SanitationPolicy::validate(const LipScale& scale) const {
  const double lo = low(scale);
  const double hi = high(scale);
  if (!(0.0 < lo && lo <= hi && hi < scale.bound())) {
    throw ValidationError("sanitation bounds must satisfy 0 < low <= high < M; got low=" +
                          std::to_string(lo) + " high=" + std::to_string(hi) +
                          " M=" + std::to_string(scale.bound()));
  }
}

Sanitized<GreyImage> sanitize(const GreyImage& image, const SanitationPolicy& policy) {
  Sanitized<GreyImage> out{image, 0};
  out.clamped_count = sanitize_values(out.value.pixels, image.width, image.scale, policy,
                                      [](std::size_t) { return false; });
  return out;
}

Sanitized<StructuringFunction> sanitize(const StructuringFunction& probe,
                                        const SanitationPolicy& policy) {
  Sanitized<StructuringFunction> out{probe, 0};
  const auto& mask = probe.active;
  out.clamped_count =
      sanitize_values(out.value.values, probe.width, probe.scale, policy,
                      [&mask](std::size_t i) { return mask[i] == 0; });
  return out;
}

RealPlane tilde_plane(const GreyImage& image) {
  RealPlane out(image.width, image.height);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    out.values[i] = tilde(image.pixels[i], image.scale);
  }
  return out;
}

RealPlane hat_plane(const GreyImage& image) {
  RealPlane out(image.width, image.height);
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    out.values[i] = hat(image.pixels[i], image.scale);
  }
  return out;
}

namespace {

template <class Fn>
AdditiveSF transform_sf(const StructuringFunction& probe, Fn fn) {
  std::vector<double> values(probe.values.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (probe.active[i] != 0) values[i] = fn(probe.values[i], probe.scale);
  }
  return AdditiveSF(probe.width, probe.height, std::move(values), probe.active, probe.anchor);
}

}  // namespace

AdditiveSF tilde_sf(const StructuringFunction& probe) {
  return transform_sf(probe, [](double v, const LipScale& s) { return tilde(v, s); });
}

AdditiveSF hat_sf(const StructuringFunction& probe) {
  return transform_sf(probe, [](double v, const LipScale& s) { return hat(v, s); });
}

}  // namespace lipasp

#include "lipasp/asplund.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipasp/errors.hpp"
#include "lipasp/morphology.hpp"

namespace lipasp {

namespace {

void require_compatible(const GreyImage& image, const StructuringFunction& probe) {
  probe.validate();
  if (!(image.scale == probe.scale)) {
    throw ValidationError("image and probe use different grey-scale bounds (M = " +
                          std::to_string(image.scale.bound()) + " vs " +
                          std::to_string(probe.scale.bound()) + ")");
  }
  if (probe.width > image.width || probe.height > image.height) {
    throw SizeError("probe " + std::to_string(probe.width) + "x" +
                    std::to_string(probe.height) + " is larger than image " +
                    std::to_string(image.width) + "x" + std::to_string(image.height));
  }
}

struct Prepared {
  GreyImage image;
  StructuringFunction probe;
  std::size_t clamped = 0;
};

Prepared prepare(const AsplundRequest& request) {
  if (request.border != BorderPolicy::valid) {
    throw ValidationError("distance maps are only defined on the valid region");
  }
  auto img = sanitize(request.image, request.sanitation);
  auto prb = sanitize(request.probe, request.sanitation);
  require_compatible(img.value, prb.value);
  return {std::move(img.value), std::move(prb.value), img.clamped_count + prb.clamped_count};
}

// Negated tilde plane: positive values, used by the multiplicative forms.
RealPlane neg_tilde_plane(const GreyImage& image) {
  RealPlane p = tilde_plane(image);
  for (double& v : p.values) v = -v;
  return p;
}

RealPlane exp_plane(RealPlane p) {
  for (double& v : p.values) v = std::exp(v);
  return p;
}

DistanceMap make_map(RealPlane plane, Coord origin, MapMethod method) {
  DistanceMap map;
  map.width = plane.width;
  map.height = plane.height;
  map.origin = origin;
  map.values = std::move(plane.values);
  map.method = method;
  return map;
}

}  // namespace

LambdaMuPair lambda_mu(const GreyImage& image, const StructuringFunction& probe) {
  require_compatible(image, probe);
  const RealPlane ft = tilde_plane(image);
  const AdditiveSF bt = tilde_sf(probe);

  const int out_w = image.width - probe.width + 1;
  const int out_h = image.height - probe.height + 1;
  LambdaMuPair out{RealPlane(out_w, out_h), RealPlane(out_w, out_h)};

  struct Tap {
    int dx, dy;
    double denom;
  };
  std::vector<Tap> taps;
  for (int j = 0; j < probe.height; ++j) {
    for (int i = 0; i < probe.width; ++i) {
      if (bt.is_active(i, j)) taps.push_back({i, j, bt.value(i, j)});
    }
  }

  for (int y = 0; y < out_h; ++y) {
    double* lam = &out.lambda_plane.values[out.lambda_plane.index(0, y)];
    double* mu = &out.mu_plane.values[out.mu_plane.index(0, y)];
    bool first = true;
    for (const Tap& t : taps) {
      const double* src = &ft.values[ft.index(t.dx, y + t.dy)];
      for (int x = 0; x < out_w; ++x) {
        const double r = src[x] / t.denom;
        if (first) {
          lam[x] = r;
          mu[x] = r;
        } else {
          lam[x] = r > lam[x] ? r : lam[x];
          mu[x] = r < mu[x] ? r : mu[x];
        }
      }
      first = false;
    }
  }
  return out;
}

RealPlane lambda_map(const GreyImage& image, const StructuringFunction& probe) {
  return lambda_mu(image, probe).lambda_plane;
}

RealPlane mu_map(const GreyImage& image, const StructuringFunction& probe) {
  return lambda_mu(image, probe).mu_plane;
}

ExtremumPaths lambda_via_mult_dilation(const GreyImage& image, const StructuringFunction& probe) {
  require_compatible(image, probe);
  AdditiveSF inv_neg = tilde_sf(probe);
  for (std::size_t i = 0; i < inv_neg.values.size(); ++i) {
    if (inv_neg.active[i] != 0) inv_neg.values[i] = -1.0 / inv_neg.values[i];
  }
  ExtremumPaths out;
  out.via_mult = dilate_mult(neg_tilde_plane(image), reflect(inv_neg), BorderPolicy::valid);
  out.via_hat = exp_plane(dilate_add(hat_plane(image), negate(reflect(hat_sf(probe))),
                                     BorderPolicy::valid, MorphEngine::naive));
  return out;
}

ExtremumPaths mu_via_mult_erosion(const GreyImage& image, const StructuringFunction& probe) {
  require_compatible(image, probe);
  ExtremumPaths out;
  out.via_mult = erode_mult(neg_tilde_plane(image), negate(tilde_sf(probe)), BorderPolicy::valid);
  out.via_hat = exp_plane(
      erode_add(hat_plane(image), hat_sf(probe), BorderPolicy::valid, MorphEngine::naive));
  return out;
}

DistanceMap asplund_direct(const AsplundRequest& request) {
  const Prepared in = prepare(request);
  auto [lam, mu] = lambda_mu(in.image, in.probe);
  for (std::size_t i = 0; i < lam.values.size(); ++i) {
    lam.values[i] = std::log(lam.values[i] / mu.values[i]);
  }
  return make_map(std::move(lam), in.probe.anchor, MapMethod::direct);
}

DistanceMap asplund_gradient(const AsplundRequest& request, MorphEngine engine) {
  const Prepared in = prepare(request);
  const RealPlane fh = hat_plane(in.image);
  const AdditiveSF bh = hat_sf(in.probe);

  RealPlane upper;
  RealPlane lower;
  const bool flat = bh.is_full_rectangle() && bh.is_flat();
  if (engine == MorphEngine::fast && !flat) {
    throw ValidationError("fast gradient path requires a flat rectangular probe");
  }
  if (flat && engine != MorphEngine::naive) {
    // A constant hat B shifts max and min alike and cancels.
    upper = sliding_extremum_flat(fh, bh.width, bh.height, ExtremumKind::max,
                                  BorderPolicy::valid);
    lower = sliding_extremum_flat(fh, bh.width, bh.height, ExtremumKind::min,
                                  BorderPolicy::valid);
  } else {
    upper = dilate_add(fh, negate(reflect(bh)), BorderPolicy::valid, MorphEngine::naive);
    lower = erode_add(fh, bh, BorderPolicy::valid, MorphEngine::naive);
  }
  for (std::size_t i = 0; i < upper.values.size(); ++i) upper.values[i] -= lower.values[i];
  return make_map(std::move(upper), in.probe.anchor, MapMethod::gradient);
}

double max_abs_difference(const DistanceMap& a, const DistanceMap& b) {
  if (a.width != b.width || a.height != b.height || !(a.origin == b.origin)) {
    throw SizeError("distance maps have different geometry");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = std::abs(a.values[i] - b.values[i]);
    if (!(d <= worst)) worst = d;  // propagates NaN
  }
  return worst;
}

AsplundResult compute_asplund(const AsplundRequest& request) {
  AsplundResult result;
  {
    // Counted once, independently of how many forms run.
    const auto img = sanitize(request.image, request.sanitation);
    const auto prb = sanitize(request.probe, request.sanitation);
    result.clamped_pixels = img.clamped_count + prb.clamped_count;
  }
  switch (request.method) {
    case AsplundMethod::direct:
      result.map = asplund_direct(request);
      break;
    case AsplundMethod::gradient:
      result.map = asplund_gradient(request);
      break;
    case AsplundMethod::both: {
      const DistanceMap direct = asplund_direct(request);
      result.map = asplund_gradient(request);
      const double gap = max_abs_difference(direct, result.map);
      result.max_discrepancy = gap;
      if (!(gap <= kEquivalenceTolerance)) {
        throw EquivalenceError("ratio and gradient forms differ by " + std::to_string(gap), gap);
      }
      break;
    }
  }
  return result;
}

std::vector<Match> match_threshold(const DistanceMap& map, double threshold) {
  if (!(threshold >= 0.0)) {
    throw DomainError("match threshold must be >= 0, got " + std::to_string(threshold));
  }
  std::vector<Match> hits;
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      const double v = map.at(x, y);
      if (v <= threshold) hits.push_back({x + map.origin.x, y + map.origin.y, v});
    }
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const Match& a, const Match& b) { return a.value < b.value; });
  return hits;
}

}  // namespace lipasp

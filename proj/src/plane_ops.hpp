#pragma once

// Internal helpers shared by the morphology engines.

#include <optional>

#include "lipasp/raster.hpp"

namespace lipasp::internal {

struct Padding {
  int left = 0;
  int right = 0;
  int top = 0;
  int bottom = 0;
};

/// Padding that turns a replicate-mode (full size) filter into a valid-mode
/// scan over the padded plane.
Padding dilation_padding(int w, int h, Coord anchor);
Padding erosion_padding(int w, int h, Coord anchor);

/// Edge replication when `constant` is empty, constant fill otherwise.
RealPlane pad_plane(const RealPlane& plane, const Padding& pad,
                    std::optional<double> constant = std::nullopt);

void require_fits(const RealPlane& plane, int w, int h, const char* what);

}  // namespace lipasp::internal

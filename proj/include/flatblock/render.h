#pragma once

// SVG figures of surfaces with segment, point and cylinder overlays.

#include <optional>
#include <string>
#include <vector>

#include "flatblock/tracer.h"

namespace flatblock {

struct RenderOverlay {
  std::vector<Segment> segments;
  std::vector<SurfacePoint> points;
  std::optional<CylinderDecomposition> cylinders;
  /// Colour class per face; empty draws every face alike.
  std::vector<int> face_groups;
};

struct Layout {
  /// Face f is drawn at its local coordinates plus offsets[f] (as doubles).
  std::vector<std::pair<double, double>> offsets;
  bool developed = true;
};

/// Faces developed along a spanning tree, or side by side on overlap.
Layout layout_faces(const Surface& m);

std::string render_svg(const Surface& m, const RenderOverlay& overlay);
/// Throws IOError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace flatblock

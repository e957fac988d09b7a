#pragma once

// Contacts between segment interiors, shared by verification and the
// stabbing searches.

#include <functional>
#include <vector>

#include "flatblock/blocking.h"
#include "flatblock/tracer.h"

namespace flatblock::detail {

struct Contact {
  /// Face of the contact, -1 for a shared regular vertex (class in vertex).
  int face = -1;
  int vertex = -1;
  /// Face-local point, or the two ends of a collinear overlap.
  Vec2 p;
  Vec2 q;
  bool overlap = false;
};

struct PieceBox {
  int face;
  double x0, x1, y0, y1;
  /// Approximate end points.
  double ax, ay, bx, by;
};

/// Approximate piece boxes used to skip exact tests.
std::vector<PieceBox> piece_boxes(const Segment& s);

/// Reports contacts of the two segment interiors; stops when fn returns false.
void for_each_contact(const Segment& a, const std::vector<PieceBox>& ba, const Segment& b,
                      const std::vector<PieceBox>& bb, const std::function<bool(const Contact&)>& fn);

bool on_closed_piece(const Vec2& a, const Vec2& b, const Vec2& p);

/// min_stab that also hands back the disjoint family it bounds with.
StabbingSet min_stab_with_family(const Surface& m, const SurfacePoint& x, const SurfacePoint& y,
                                 const std::vector<Segment>& segments, long node_limit, DisjointFamily& family);

}  // namespace flatblock::detail

#pragma once

// Face-by-face straight walking shared by the tracer and the cylinder code.

#include <functional>
#include <vector>

#include "flatblock/tracer.h"

namespace flatblock::detail {

struct Step {
  Vec2 exit;
  bool at_vertex = false;
  /// Corner index when at_vertex, otherwise the exited edge.
  int index = -1;
  /// Side the piece runs along, or -1.
  int along = -1;
};

/// Exit of the ray pos + s*dir (s > 0) from the closed convex face.
Step step(const Surface& m, int face, const Vec2& pos, const Vec2& dir);

/// The corner of a vertex class whose half-open sector contains dir.
CornerRef sector_corner(const Surface& m, int vertex_class, const Vec2& dir);

/// Piece with along-edge pieces moved onto the lower side of their pair.
Piece canonical_piece(const Surface& m, int face, const Vec2& from, const Vec2& to, const Vec2& offset, int along);

struct Walk {
  int face = 0;
  Vec2 pos;
  Vec2 offset;
  Vec2 dir;
  /// Developed start point; lengths are measured from here.
  Vec2 origin;
  std::vector<Piece> pieces;
  std::vector<Crossing> crossings;
};

enum class WalkStop { BlockingVertex, Budget, Callback, Steps };

struct WalkOutcome {
  WalkStop why = WalkStop::Budget;
  int vertex_class = -1;
};

/// Called with the walk state before the piece [from, to] in face is
/// appended; return false to stop.
using PieceFn = std::function<bool(const Walk&, int face, const Vec2& from, const Vec2& to, int along)>;
/// Called on arrival at a vertex within the budget, after the piece.
using VertexFn = std::function<void(const Walk&, int vertex_class, const Vec2& developed)>;

/// Walks until a blocking vertex, the budget (start of a piece beyond
/// it), a callback stop or max_steps pieces.
WalkOutcome walk(const Surface& m, Walk& w, const Scalar& budget, const PieceFn& on_piece, const VertexFn& on_vertex,
                 long max_steps);

}  // namespace flatblock::detail

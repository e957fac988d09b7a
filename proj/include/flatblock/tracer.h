#pragma once

// Straight-line flow: single traces, complete segment enumeration between
// two points, saddle connections and directional cylinder decompositions.

#include <optional>
#include <string>
#include <vector>

#include "flatblock/surface.h"

namespace flatblock {

struct Crossing {
  enum class Kind { Edge, Vertex, AlongEdge };
  Kind kind = Kind::Edge;
  /// Edge: exited side (face, edge) with parameter t in (0,1) along it.
  /// Vertex: face holds the class id of a regular vertex passed through.
  /// AlongEdge: the lower side of the glued pair the segment runs along.
  int face = -1;
  int edge = -1;
  Scalar t;

  friend bool operator==(const Crossing&, const Crossing&) = default;
  friend std::strong_ordering operator<=>(const Crossing& l, const Crossing& r);
  std::string str() const;
};

/// Part of a segment inside one face, in face-local coordinates; the
/// developed position of a local point p is p + offset.
struct Piece {
  int face = -1;
  Vec2 from;
  Vec2 to;
  Vec2 offset;
  bool along_edge = false;

  friend bool operator==(const Piece&, const Piece&) = default;
  friend std::strong_ordering operator<=>(const Piece& l, const Piece& r);
};

struct Segment {
  SurfacePoint start;
  SurfacePoint end;
  Vec2 holonomy;
  Scalar length_sq;
  std::vector<Crossing> crossings;
  std::vector<Piece> pieces;

  /// Canonical order: length, crossing sequence, holonomy, pieces.
  friend std::strong_ordering operator<=>(const Segment& l, const Segment& r);
  friend bool operator==(const Segment& l, const Segment& r) { return (l <=> r) == 0; }

  /// "len_sq=<S> hol=(<S>,<S>) crossings=[...]"
  std::string str() const;
};

/// Fields of one serialized segment record.
struct SegmentRecord {
  Scalar length_sq;
  Vec2 holonomy;
  std::vector<Crossing> crossings;
};

Crossing parse_crossing(std::string_view text);
/// Parses a line produced by Segment::str.
SegmentRecord parse_segment_record(std::string_view line);

struct EnumerationOptions {
  long max_nodes = 10'000'000;
  int workers = 1;
};

/// Every singularity-free straight segment from x to y with length^2 at
/// most max_len_sq, in canonical order. Throws BudgetTooLargeGuard when the
/// unfolding tree exceeds max_nodes.
std::vector<Segment> segments_between(const Surface& m, const SurfacePoint& x, const SurfacePoint& y,
                                      const Scalar& max_len_sq, const EnumerationOptions& opts = {});

/// Segments joining blocking vertices. Throws NoSingularities.
std::vector<Segment> saddle_connections(const Surface& m, const Scalar& max_len_sq,
                                        const EnumerationOptions& opts = {});

struct TraceResult {
  bool stopped_at_singularity = false;
  /// The singularity reached, or the end point at the budget.
  SurfacePoint point;
  Vec2 holonomy;
  Scalar length_sq;
  std::vector<Crossing> crossings;
  std::vector<Piece> pieces;
  /// False when the budget point is not in the field; point is then the
  /// last face exit before the budget.
  bool exact_end = true;
};

/// Forward trace from start in direction dir. A blocking start vertex needs
/// the corner whose sector contains dir. Throws ZeroDirection, SectorRequired.
TraceResult trace(const Surface& m, const SurfacePoint& start, const Vec2& dir, const Scalar& max_len_sq,
                  std::optional<CornerRef> sector = std::nullopt);

// ---------------------------------------------------------------- cylinders

struct Cylinder {
  /// Core curve holonomy is scale * direction.
  Scalar scale;
  Vec2 holonomy;
  Scalar circumference_sq;
  Scalar height_sq;
  Scalar area;
  /// Indices into CylinderDecomposition::saddles.
  std::vector<int> bottom;
  std::vector<int> top;
};

struct CylinderDecomposition {
  Vec2 direction;
  bool complete = false;
  std::vector<Cylinder> cylinders;
  /// Horizontal saddle connections in the direction (all prongs).
  std::vector<Segment> saddles;
  /// When incomplete: the prong that did not close within the budget.
  std::optional<TraceResult> witness;
  /// ratio[i] = scale_i / scale_0.
  std::vector<Scalar> ratios;
};

/// Cylinder decomposition in direction dir. Prongs are traced up to
/// max_len_sq (default derived from the face perimeters).
CylinderDecomposition cylinder_decomposition(const Surface& m, const Vec2& dir,
                                             std::optional<Scalar> max_len_sq = std::nullopt);

struct PeriodicityVerdict {
  enum class Kind { Yes, No, Undecided };
  Kind kind = Kind::Undecided;
  CylinderDecomposition decomposition;
  /// For No: indices of two cylinders with an irrational circumference ratio.
  std::pair<int, int> witness{-1, -1};
};

PeriodicityVerdict purely_periodic_in_direction(const Surface& m, const Vec2& dir,
                                                std::optional<Scalar> max_len_sq = std::nullopt);

}  // namespace flatblock

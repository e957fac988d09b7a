#pragma once

// Absolute holonomy, torus-cover detection and the covering map.

#include <optional>
#include <utility>
#include <vector>

#include "flatblock/surface.h"

namespace flatblock {

struct HolonomyGroup {
  /// Holonomy of one closed curve per non-tree gluing of the face graph.
  std::vector<Vec2> generators;
  /// Rank of the group as an abstract Z-module.
  int z_rank = 0;
  /// Dimension of the real span.
  int span_dim = 0;
  /// Reduced positively oriented basis when the group is a lattice.
  std::optional<std::pair<Vec2, Vec2>> lattice_basis;

  bool discrete() const { return z_rank == span_dim; }
};

HolonomyGroup absolute_holonomy(const Surface& m);

/// Point of R^2 / (Z u + Z w) in lattice coordinates, both in [0, 1).
struct TorusPoint {
  Scalar s;
  Scalar t;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
  friend std::strong_ordering operator<=>(const TorusPoint& l, const TorusPoint& r) {
    if (auto c = l.s <=> r.s; c != 0) return c;
    return l.t <=> r.t;
  }
  /// "[s,t]"
  std::string str() const;
};

/// Reduces both coordinates into [0, 1).
TorusPoint torus_reduce(const Scalar& s, const Scalar& t);
TorusPoint parse_torus_point(std::string_view text);

struct BranchPoint {
  TorusPoint point;
  int vertex_class = -1;
  /// Ramification index: the cone angle over 2 pi.
  int multiplicity = 1;
};

struct TorusCoverVerdict {
  bool is_cover = false;
  Vec2 u;
  Vec2 w;
  /// area / covolume.
  Rational degree;
  std::vector<BranchPoint> branch_points;
  /// When not a cover: generators whose Z-span is not discrete.
  std::vector<Vec2> witness;
  HolonomyGroup group;
};

/// Maximal translation torus cover: the quotient by the holonomy lattice.
TorusCoverVerdict torus_cover(const Surface& m);

/// Translation covering map to R^2 / (Z u + Z w).
struct CoverMap {
  Vec2 u;
  Vec2 w;
  std::vector<Vec2> face_offsets;
  Rational degree;
  /// Taken from the construction rather than detected.
  bool from_construction = false;

  /// Lattice coordinates of a plane vector.
  std::pair<Scalar, Scalar> coordinates(const Vec2& v) const;
  Vec2 plane(const TorusPoint& p) const;
};

/// The construction-time cover when present, otherwise the detected
/// maximal torus cover. Throws NoCoverData.
CoverMap cover_map(const Surface& m);

TorusPoint project(const Surface& m, const CoverMap& c, const SurfacePoint& p);
/// All points of the surface over a torus point, in canonical order.
std::vector<SurfacePoint> fiber(const Surface& m, const CoverMap& c, const TorusPoint& p);

}  // namespace flatblock

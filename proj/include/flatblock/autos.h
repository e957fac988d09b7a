#pragma once

// Affine automorphisms that permute faces: p in face f goes to
// D p + translations[f] in face face_perm[f].

#include <optional>
#include <vector>

#include "flatblock/tracer.h"

namespace flatblock {

struct AffineAuto {
  Mat2 linear;
  std::vector<int> face_perm;
  std::vector<Vec2> translations;
  int order = 1;

  SurfacePoint apply(const Surface& m, const SurfacePoint& p) const;
};

/// Extends the map sending face seed_face to target_face by
/// p -> D p + t across every gluing. Throws NotApplicable when the
/// propagation is inconsistent or not a bijection on faces.
AffineAuto propagate_affine(const Surface& m, const Mat2& linear, int seed_face, int target_face, const Vec2& t);

/// Order-3 deck translation of the staircase. Throws NotApplicable elsewhere.
AffineAuto deck_translation(const Surface& m);

/// Rotation by pi of an L-shaped surface. Throws NotApplicable elsewhere.
AffineAuto hyperelliptic_involution(const Surface& m);

struct FixedPoint {
  SurfacePoint point;
  bool cone_point = false;
};

/// Fixed points of an involution with linear part -I, canonical order.
std::vector<FixedPoint> fixed_points(const Surface& m, const AffineAuto& h);

/// Regular fixed points of the hyperelliptic involution.
std::vector<SurfacePoint> weierstrass_points(const Surface& m);

/// Point of a segment at fraction r of its length, 0 < r < 1.
SurfacePoint segment_point_at(const Surface& m, const Segment& s, const Rational& r);

struct MidpointCheck {
  SurfacePoint x;
  SurfacePoint y;
  size_t segments = 0;
  /// First segment whose midpoint is not among the given points.
  std::optional<Segment> counterexample;
  bool verified() const { return !counterexample; }
};

/// Checks that every segment from x to h(x) up to the budget has its
/// midpoint in points (default: the Weierstrass points). Throws
/// PreconditionFailed when x is fixed or blocking.
MidpointCheck weierstrass_midpoint_check(const Surface& m, const SurfacePoint& x, const Scalar& max_len_sq,
                                         std::optional<std::vector<SurfacePoint>> points = std::nullopt,
                                         const EnumerationOptions& opts = {});

}  // namespace flatblock

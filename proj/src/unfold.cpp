#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "flatblock/surface.h"

namespace flatblock {

namespace {

Mat2 reflection(const Vec2& e) {
  Scalar n = norm_sq(e);
  Scalar xx = e.x * e.x, yy = e.y * e.y, xy = e.x * e.y;
  return {(xx - yy) / n, (xy + xy) / n, (xy + xy) / n, (yy - xx) / n};
}

// Field needed for the rotation by 2*pi/q: 0 means any field works.
long field_for_rotation(long q) {
  if (q == 1 || q == 2 || q == 4) return 0;
  if (q == 3 || q == 6 || q == 12) return 3;
  if (q == 8) return 2;
  return -1;
}

}  // namespace

Unfolding unfold_billiard(const RationalPolygon& p) {
  const int n = static_cast<int>(p.vertices.size());
  if (n < 3) throw Error(ErrorCode::BadPolygon, "polygon needs at least 3 vertices");
  if (static_cast<int>(p.angles.size()) != n) throw Error(ErrorCode::BadPolygon, "one angle per vertex required");
  Rational total(0);
  long order = 1;
  for (int i = 0; i < n; ++i) {
    const Rational& a = p.angles[i];
    if (sgn(a) <= 0) throw Error(ErrorCode::BadPolygon, "angle " + std::to_string(i) + " is not positive");
    if (a >= 1) throw Error(ErrorCode::NonConvexFace, "angle " + std::to_string(i) + " is at least pi; only convex tables unfold");
    total += a;
    long q = a.get_den().get_si();
    long need = field_for_rotation(q);
    if (need < 0 || (need > 0 && need != p.field_d)) {
      std::string where = need < 0 ? "any real quadratic field" : "Q(sqrt " + std::to_string(p.field_d) + ")";
      throw Error(ErrorCode::FieldInsufficient,
                  "cos(2*pi/" + std::to_string(q) + ") and sin(2*pi/" + std::to_string(q) + ") are not both in " + where);
    }
    order = std::lcm(order, q);
  }
  if (total != n - 2) throw Error(ErrorCode::BadPolygon, "angles sum to " + format_rational(total) + "*pi");
  for (const auto& v : p.vertices)
    for (const Scalar* c : {&v.x, &v.y})
      if (!c->is_rational() && c->field() != p.field_d)
        throw Error(ErrorCode::FieldMismatch, "coordinate " + c->str() + " outside Q(sqrt " + std::to_string(p.field_d) + ")");

  std::vector<Vec2> sides;
  for (int i = 0; i < n; ++i) sides.push_back(p.vertices[(i + 1) % n] - p.vertices[i]);
  for (int i = 0; i < n; ++i) {
    const Vec2& in = sides[(i + n - 1) % n];
    const Vec2& out = sides[i];
    if (cross(in, out).sign() <= 0) throw Error(ErrorCode::NonConvexFace, "polygon is not strictly convex and counterclockwise");
    // Interior angle check in floating point: distinct admissible angles
    // differ by far more than the rounding error.
    double ax = -in.x.to_double(), ay = -in.y.to_double();
    double bx = out.x.to_double(), by = out.y.to_double();
    double angle = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    double expected = M_PI * p.angles[i].get_d();
    if (std::fabs(std::fabs(angle) - expected) > 1e-9)
      throw Error(ErrorCode::BadPolygon, "angle at vertex " + std::to_string(i) + " does not match the coordinates");
  }

  std::vector<Mat2> refl;
  for (const auto& s : sides) refl.push_back(reflection(s));

  Unfolding out;
  std::map<Mat2, int> index;
  out.group.push_back(Mat2::identity());
  index[Mat2::identity()] = 0;
  const size_t limit = static_cast<size_t>(2 * order);
  for (size_t k = 0; k < out.group.size(); ++k)
    for (const auto& r : refl) {
      Mat2 g = out.group[k] * r;
      if (index.count(g)) continue;
      if (out.group.size() == limit) throw Error(ErrorCode::BadPolygon, "reflection group larger than the angles allow");
      index[g] = static_cast<int>(out.group.size());
      out.group.push_back(g);
    }

  RawSurface raw;
  raw.field_d = p.field_d;
  raw.name = "unfolding";
  std::vector<bool> flipped;
  for (const auto& g : out.group) {
    bool flip = g.det().sign() < 0;
    flipped.push_back(flip);
    std::vector<Vec2> face(n);
    std::vector<int> corner(n);
    for (int i = 0; i < n; ++i) {
      corner[i] = flip ? (n - i) % n : i;
      face[corner[i]] = g * p.vertices[i];
    }
    raw.faces.push_back(std::move(face));
    out.corner_of.push_back(std::move(corner));
  }
  // Side i of a copy runs from its vertex i to vertex i+1.
  auto side_edge = [&](int c, int i) { return flipped[c] ? (n - i - 1) % n : i; };
  for (size_t c = 0; c < out.group.size(); ++c)
    for (int i = 0; i < n; ++i) {
      int other = index.at(out.group[c] * refl[i]);
      if (static_cast<int>(c) < other)
        raw.gluings.push_back({{static_cast<int>(c), side_edge(static_cast<int>(c), i)}, {other, side_edge(other, i)}});
    }
  out.surface = Surface::build(raw);
  return out;
}

std::vector<SurfacePoint> Unfolding::lift(const Vec2& p) const {
  std::vector<SurfacePoint> out;
  for (size_t c = 0; c < group.size(); ++c) {
    SurfacePoint s = locate(surface, static_cast<int>(c), group[c] * p);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flatblock

#include "flatblock/autos.h"

#include <algorithm>
#include <deque>
#include <set>

namespace flatblock {

namespace {

[[noreturn]] void not_applicable(const std::string& what) { throw Error(ErrorCode::NotApplicable, what); }

int matching_edge(const Surface& m, int g, const Vec2& a, const Vec2& b) {
  for (int j = 0; j < m.num_sides(g); ++j)
    if (m.vertex(g, j) == a && m.vertex(g, (j + 1) % m.num_sides(g)) == b) return j;
  return -1;
}

bool on_closed_side(const Vec2& a, const Vec2& b, const Vec2& p) {
  if (!cross(b - a, p - a).is_zero()) return false;
  Scalar t = dot(p - a, b - a);
  return t.sign() >= 0 && t <= norm_sq(b - a);
}

int compute_order(const Surface& m, const AffineAuto& h) {
  const int nf = m.num_faces();
  std::vector<int> perm(nf);
  std::vector<Vec2> trans(nf, Vec2(0, 0));
  for (int f = 0; f < nf; ++f) perm[f] = f;
  Mat2 lin = Mat2::identity();
  for (int k = 1; k <= 64; ++k) {
    for (int f = 0; f < nf; ++f) {
      trans[f] = h.linear * trans[f] + h.translations[perm[f]];
      perm[f] = h.face_perm[perm[f]];
    }
    lin = h.linear * lin;
    if (!(lin == Mat2::identity())) continue;
    bool id = true;
    for (int f = 0; f < nf && id; ++f) id = perm[f] == f && trans[f].is_zero();
    if (id) return k;
  }
  not_applicable("map has no finite order up to 64");
}

}  // namespace

SurfacePoint AffineAuto::apply(const Surface& m, const SurfacePoint& p) const {
  LocalCopy l = local_copies(m, p).front();
  return locate(m, face_perm[l.face], linear * l.pos + translations[l.face]);
}

AffineAuto propagate_affine(const Surface& m, const Mat2& linear, int seed_face, int target_face, const Vec2& t) {
  const int nf = m.num_faces();
  if (seed_face < 0 || seed_face >= nf || target_face < 0 || target_face >= nf)
    throw Error(ErrorCode::BadParams, "face index out of range");
  AffineAuto h;
  h.linear = linear;
  h.face_perm.assign(nf, -1);
  h.translations.assign(nf, Vec2(0, 0));
  h.face_perm[seed_face] = target_face;
  h.translations[seed_face] = t;
  std::deque<int> queue{seed_face};
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop_front();
    const int g = h.face_perm[f];
    if (m.num_sides(f) != m.num_sides(g)) not_applicable("face shapes differ");
    for (int i = 0; i < m.num_sides(f); ++i) {
      Vec2 a = linear * m.vertex(f, i) + h.translations[f];
      Vec2 b = linear * m.vertex(f, (i + 1) % m.num_sides(f)) + h.translations[f];
      int j = matching_edge(m, g, a, b);
      if (j < 0) not_applicable("face " + std::to_string(f) + " does not map onto face " + std::to_string(g));
      EdgeRef q = m.partner({f, i});
      EdgeRef qi = m.partner({g, j});
      Vec2 tq = h.translations[f] + m.gluing_translation({g, j}) - linear * m.gluing_translation({f, i});
      if (h.face_perm[q.face] < 0) {
        h.face_perm[q.face] = qi.face;
        h.translations[q.face] = tq;
        queue.push_back(q.face);
      } else if (h.face_perm[q.face] != qi.face || !(h.translations[q.face] == tq)) {
        not_applicable("inconsistent across the gluing of side " + std::to_string(f) + ":" + std::to_string(i));
      }
    }
  }
  std::vector<int> sorted = h.face_perm;
  std::sort(sorted.begin(), sorted.end());
  for (int f = 0; f < nf; ++f)
    if (sorted[f] != f) not_applicable("not a bijection on faces");
  h.order = compute_order(m, h);
  return h;
}

AffineAuto deck_translation(const Surface& m) {
  if (m.name() != "staircase") not_applicable("deck translation is only known for the staircase");
  AffineAuto h = propagate_affine(m, Mat2::identity(), 0, 2, m.vertex(2, 0) - m.vertex(0, 0));
  if (h.order != 3) not_applicable("deck map has order " + std::to_string(h.order));
  return h;
}

AffineAuto hyperelliptic_involution(const Surface& m) {
  if (m.name().rfind("l_shaped", 0) != 0 && m.name() != "golden_l")
    not_applicable("hyperelliptic involution is only known for L-shaped surfaces");
  const Mat2 minus{-1, 0, 0, -1};
  AffineAuto h = propagate_affine(m, minus, 0, 0, m.vertex(0, 0) + m.vertex(0, 2));
  if (h.order != 2) not_applicable("rotation has order " + std::to_string(h.order));
  return h;
}

std::vector<FixedPoint> fixed_points(const Surface& m, const AffineAuto& h) {
  if (!(h.linear == Mat2{-1, 0, 0, -1})) not_applicable("fixed points need linear part -I");
  std::set<SurfacePoint> found;
  for (int c = 0; c < static_cast<int>(m.vertex_classes().size()); ++c)
    if (h.apply(m, vertex_point(m, c)) == vertex_point(m, c)) found.insert(vertex_point(m, c));
  for (int f = 0; f < m.num_faces(); ++f) {
    const int n = m.num_sides(f);
    if (h.face_perm[f] == f) {
      Vec2 p = h.translations[f] / 2;
      bool inside = true;
      for (int i = 0; i < n && inside; ++i)
        inside = cross(m.vertex(f, (i + 1) % n) - m.vertex(f, i), p - m.vertex(f, i)).sign() >= 0;
      if (inside) found.insert(locate(m, f, p));
    }
    for (int i = 0; i < n; ++i) {
      EdgeRef q = m.partner({f, i});
      if (h.face_perm[f] != q.face) continue;
      Vec2 p = (h.translations[f] - m.gluing_translation({f, i})) / 2;
      if (on_closed_side(m.vertex(f, i), m.vertex(f, (i + 1) % n), p)) found.insert(locate(m, f, p));
    }
  }
  std::vector<FixedPoint> out;
  for (const auto& p : found) out.push_back({p, is_blocking_point(m, p)});
  return out;
}

std::vector<SurfacePoint> weierstrass_points(const Surface& m) {
  std::vector<SurfacePoint> out;
  for (const auto& f : fixed_points(m, hyperelliptic_involution(m)))
    if (!f.cone_point) out.push_back(f.point);
  return out;
}

SurfacePoint segment_point_at(const Surface& m, const Segment& s, const Rational& r) {
  if (r <= 0 || r >= 1) throw Error(ErrorCode::BadParams, "fraction must lie strictly between 0 and 1");
  const Piece& first = s.pieces.front();
  Vec2 target = first.from + first.offset + Scalar(r) * s.holonomy;
  for (const auto& p : s.pieces) {
    Vec2 a = p.from + p.offset, b = p.to + p.offset;
    if (on_closed_side(a, b, target)) return locate(m, p.face, target - p.offset);
  }
  throw Error(ErrorCode::PreconditionFailed, "point not found along the segment");
}

MidpointCheck weierstrass_midpoint_check(const Surface& m, const SurfacePoint& x, const Scalar& max_len_sq,
                                         std::optional<std::vector<SurfacePoint>> points,
                                         const EnumerationOptions& opts) {
  AffineAuto h = hyperelliptic_involution(m);
  if (is_blocking_point(m, x)) throw Error(ErrorCode::PreconditionFailed, "x is a blocking vertex");
  MidpointCheck out;
  out.x = x;
  out.y = h.apply(m, x);
  if (out.y == x) throw Error(ErrorCode::PreconditionFailed, "x is a fixed point of the involution");
  std::vector<SurfacePoint> w = points ? *points : weierstrass_points(m);
  auto segs = segments_between(m, x, out.y, max_len_sq, opts);
  out.segments = segs.size();
  for (const auto& s : segs) {
    SurfacePoint mid = segment_point_at(m, s, Rational(1, 2));
    if (std::find(w.begin(), w.end(), mid) == w.end()) {
      out.counterexample = s;
      break;
    }
  }
  return out;
}

}  // namespace flatblock

#include "flatblock/blocking.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "flatblock/autos.h"
#include "segment_geom.h"

namespace flatblock {

namespace detail {

bool on_closed_piece(const Vec2& a, const Vec2& b, const Vec2& p) {
  if (!cross(b - a, p - a).is_zero()) return false;
  Scalar t = dot(p - a, b - a);
  return t.sign() >= 0 && t <= norm_sq(b - a);
}

std::vector<PieceBox> piece_boxes(const Segment& s) {
  std::vector<PieceBox> out;
  constexpr double eps = 1e-9;
  for (const auto& p : s.pieces) {
    double ax = p.from.x.to_double(), ay = p.from.y.to_double();
    double bx = p.to.x.to_double(), by = p.to.y.to_double();
    out.push_back({p.face, std::min(ax, bx) - eps, std::max(ax, bx) + eps, std::min(ay, by) - eps,
                   std::max(ay, by) + eps, ax, ay, bx, by});
  }
  return out;
}

namespace {

// Both ends of q strictly on one side of the line through p, with a wide
// margin over the rounding of the approximate coordinates.
bool clearly_apart(const PieceBox& p, const PieceBox& q) {
  double dx = p.bx - p.ax, dy = p.by - p.ay;
  double o1 = dx * (q.ay - p.ay) - dy * (q.ax - p.ax);
  double o2 = dx * (q.by - p.ay) - dy * (q.bx - p.ax);
  double scale = std::fabs(dx) + std::fabs(dy) + 1.0;
  double m1 = std::fabs(q.ax - p.ax) + std::fabs(q.ay - p.ay), m2 = std::fabs(q.bx - p.ax) + std::fabs(q.by - p.ay);
  double eps = 1e-9 * scale * (std::max(m1, m2) + 1.0);
  return (o1 > eps && o2 > eps) || (o1 < -eps && o2 < -eps);
}

// Piece k at parameter lambda is an end of the whole segment.
bool segment_end(const Segment& s, size_t k, const Scalar& lambda) {
  return (k == 0 && lambda.is_zero()) || (k + 1 == s.pieces.size() && lambda == Scalar(1));
}

}  // namespace

void for_each_contact(const Segment& a, const std::vector<PieceBox>& ba, const Segment& b,
                      const std::vector<PieceBox>& bb, const std::function<bool(const Contact&)>& fn) {
  for (const auto& ca : a.crossings) {
    if (ca.kind != Crossing::Kind::Vertex) continue;
    for (const auto& cb : b.crossings)
      if (cb.kind == Crossing::Kind::Vertex && cb.face == ca.face) {
        Contact c;
        c.vertex = ca.face;
        if (!fn(c)) return;
        break;
      }
  }
  for (size_t i = 0; i < a.pieces.size(); ++i)
    for (size_t j = 0; j < b.pieces.size(); ++j) {
      const PieceBox &x = ba[i], &y = bb[j];
      if (x.face != y.face || x.x1 < y.x0 || y.x1 < x.x0 || x.y1 < y.y0 || y.y1 < x.y0) continue;
      if (clearly_apart(x, y) || clearly_apart(y, x)) continue;
      const Piece &pa = a.pieces[i], &pb = b.pieces[j];
      const Vec2 d1 = pa.to - pa.from, d2 = pb.to - pb.from, w = pb.from - pa.from;
      const Scalar den = cross(d1, d2);
      Contact c;
      c.face = pa.face;
      if (!den.is_zero()) {
        // Range tests on numerators before dividing.
        Scalar ln = cross(w, d2), mn = cross(w, d1);
        if (den.sign() < 0) {
          ln = -ln;
          mn = -mn;
        }
        const Scalar ad = abs(den);
        if (ln.sign() < 0 || ln > ad || mn.sign() < 0 || mn > ad) continue;
        Scalar lambda = ln / ad, mu = mn / ad;
        if (segment_end(a, i, lambda) || segment_end(b, j, mu)) continue;
        c.p = c.q = pa.from + lambda * d1;
        if (!fn(c)) return;
        continue;
      }
      if (!cross(w, d1).is_zero()) continue;
      const Scalar len = norm_sq(d1);
      Scalar t1 = dot(w, d1) / len, t2 = dot(pb.to - pa.from, d1) / len;
      Scalar lo = std::max(Scalar(0), std::min(t1, t2)), hi = std::min(Scalar(1), std::max(t1, t2));
      if (hi < lo) continue;
      c.p = pa.from + lo * d1;
      c.q = pa.from + hi * d1;
      if (lo < hi) {
        c.overlap = true;
      } else {
        Scalar mu = dot(c.p - pb.from, d2) / norm_sq(d2);
        if (segment_end(a, i, lo) || segment_end(b, j, mu)) continue;
      }
      if (!fn(c)) return;
    }
}

}  // namespace detail

namespace {

// Far from the piece's line or box by a floating estimate.
bool clearly_off(const Piece& piece, double px, double py) {
  double ax = piece.from.x.to_double(), ay = piece.from.y.to_double();
  double bx = piece.to.x.to_double(), by = piece.to.y.to_double();
  constexpr double eps = 1e-9;
  if (px < std::min(ax, bx) - eps || px > std::max(ax, bx) + eps || py < std::min(ay, by) - eps ||
      py > std::max(ay, by) + eps)
    return true;
  double o = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
  return std::fabs(o) > eps * (std::fabs(bx - ax) + std::fabs(by - ay) + 1.0) * (std::fabs(px - ax) + std::fabs(py - ay) + 1.0);
}

}  // namespace

bool in_segment_interior(const Surface& m, const Segment& s, const SurfacePoint& p) {
  if (is_blocking_point(m, p)) return false;
  for (const auto& l : local_copies(m, p)) {
    const double px = l.pos.x.to_double(), py = l.pos.y.to_double();
    for (size_t k = 0; k < s.pieces.size(); ++k) {
      const Piece& piece = s.pieces[k];
      if (piece.face != l.face || clearly_off(piece, px, py)) continue;
      if (!detail::on_closed_piece(piece.from, piece.to, l.pos)) continue;
      if (k == 0 && l.pos == piece.from) continue;
      if (k + 1 == s.pieces.size() && l.pos == piece.to) continue;
      return true;
    }
  }
  return false;
}

bool interiors_intersect(const Surface&, const Segment& a, const Segment& b) {
  bool hit = false;
  detail::for_each_contact(a, detail::piece_boxes(a), b, detail::piece_boxes(b), [&](const detail::Contact&) {
    hit = true;
    return false;
  });
  return hit;
}

VerifyResult verify_blocking(const Surface& m, const std::vector<Segment>& segments,
                             const std::vector<SurfacePoint>& set) {
  VerifyResult r;
  r.segments = segments.size();
  for (const auto& s : segments) {
    bool hit = std::any_of(set.begin(), set.end(), [&](const SurfacePoint& p) { return in_segment_interior(m, s, p); });
    if (!hit) {
      r.blocked = false;
      r.witness = s;
      break;
    }
  }
  return r;
}

VerifyResult verify_blocking(const Surface& m, const SurfacePoint& x, const SurfacePoint& y, const Scalar& max_len_sq,
                             const std::vector<SurfacePoint>& set, const EnumerationOptions& opts) {
  for (const auto& p : set)
    if (p == x || p == y) throw Error(ErrorCode::ContainsEndpoint, "set contains " + format_point(p));
  return verify_blocking(m, segments_between(m, x, y, max_len_sq, opts), set);
}

// ---------------------------------------------------------------- torus

std::vector<TorusPoint> mn_preimage(int n, const TorusPoint& p) {
  if (n < 1) throw Error(ErrorCode::BadParams, "n must be positive");
  std::vector<TorusPoint> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(torus_reduce((p.s + i) / n, (p.t + j) / n));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TorusPoint> torus_blocking_set(const TorusPoint& x, const TorusPoint& y, int n, int a) {
  if (n < 2 || a < 1 || a >= n || std::gcd(n, a) != 1)
    throw Error(ErrorCode::BadParams, "need n >= 2 and 1 <= a < n coprime to n");
  if (x == y) throw Error(ErrorCode::BadParams, "x and y coincide; use the diagonal set");
  TorusPoint target = torus_reduce(Scalar(n - a) * x.s + Scalar(a) * y.s, Scalar(n - a) * x.t + Scalar(a) * y.t);
  return mn_preimage(n, target);
}

std::vector<TorusPoint> torus_blocking_set_diagonal(const TorusPoint& x, int n) {
  if (n < 2) throw Error(ErrorCode::BadParams, "need n >= 2");
  std::vector<TorusPoint> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i || j) out.push_back(torus_reduce(x.s + Scalar::ratio(i, n), x.t + Scalar::ratio(j, n)));
  std::sort(out.begin(), out.end());
  return out;
}

LiftedSet lift_blocking_to_cover(const Surface& m, const CoverMap& c, const std::vector<TorusPoint>& base) {
  LiftedSet out;
  std::set<SurfacePoint> all;
  for (const auto& b : base) {
    LiftedSet::Entry e;
    e.base = b;
    e.fiber = fiber(m, c, b);
    for (const auto& p : e.fiber) {
      e.ramification.push_back(p.kind == PointKind::Vertex ? m.vertex_class_info(p.index).multiplicity : 1);
      all.insert(p);
    }
    out.entries.push_back(std::move(e));
  }
  out.points.assign(all.begin(), all.end());
  return out;
}

namespace {

bool all_blocking(const Surface& m, const LiftedSet& l) {
  return std::all_of(l.points.begin(), l.points.end(), [&](const SurfacePoint& p) { return is_blocking_point(m, p); });
}

std::vector<TorusPoint> certificate_base(const NonIlluminationCertificate& c) {
  return c.a == 0 ? torus_blocking_set_diagonal(c.px, c.n) : torus_blocking_set(c.px, c.py, c.n, c.a);
}

}  // namespace

std::optional<NonIlluminationCertificate> certify_non_illumination(const Surface& m, const SurfacePoint& x,
                                                                   const SurfacePoint& y, int max_n) {
  CoverMap c = cover_map(m);
  std::set<TorusPoint> branch;
  for (int k = 0; k < static_cast<int>(m.vertex_classes().size()); ++k)
    if (m.vertex_class_info(k).blocking()) branch.insert(project(m, c, vertex_point(m, k)));
  NonIlluminationCertificate cert;
  cert.px = project(m, c, x);
  cert.py = project(m, c, y);
  for (int n = 2; n <= max_n && n * n - 1 <= static_cast<int>(branch.size()); ++n)
    for (int a = cert.px == cert.py ? 0 : 1; a < n; ++a) {
      if (a && std::gcd(n, a) != 1) continue;
      cert.n = n;
      cert.a = a;
      auto base = certificate_base(cert);
      if (!std::all_of(base.begin(), base.end(), [&](const TorusPoint& p) { return branch.count(p) > 0; })) {
        if (a == 0) break;
        continue;
      }
      cert.lifted = lift_blocking_to_cover(m, c, base);
      if (all_blocking(m, cert.lifted)) return cert;
      if (a == 0) break;
    }
  return std::nullopt;
}

bool check_certificate(const Surface& m, const NonIlluminationCertificate& cert) {
  CoverMap c = cover_map(m);
  LiftedSet l = lift_blocking_to_cover(m, c, certificate_base(cert));
  return !l.points.empty() && all_blocking(m, l);
}

// ---------------------------------------------------------------- report

BlockingReport bc_report(const Surface& m, const SurfacePoint& x, const SurfacePoint& y, const Scalar& max_len_sq,
                         const EnumerationOptions& opts) {
  BlockingReport r;
  r.budget = max_len_sq;
  auto segs = segments_between(m, x, y, max_len_sq, opts);
  r.segments = segs.size();
  r.stab = detail::min_stab_with_family(m, x, y, segs, 2'000'000, r.family);
  r.lower = r.stab.optimal ? static_cast<int>(r.stab.points.size()) : static_cast<int>(r.family.members.size());

  std::optional<CoverMap> cover;
  try {
    cover = cover_map(m);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCoverData) throw;
  }
  if (cover) {
    if (auto cert = certify_non_illumination(m, x, y)) {
      r.certificate = cert;
      r.upper_kind = BlockingReport::UpperKind::Structural;
      r.upper = 0;
      r.upper_source = "non-illumination n=" + std::to_string(cert->n) + " a=" + std::to_string(cert->a);
      return r;
    }
  }

  std::vector<std::pair<std::string, std::vector<SurfacePoint>>> candidates;
  candidates.push_back({"empty", {}});
  if (cover) {
    const std::string kind = cover->degree == 1 ? "torus" : "lift";
    TorusPoint px = project(m, *cover, x), py = project(m, *cover, y);
    auto add_lift = [&](const std::string& label, const std::vector<TorusPoint>& base) {
      std::vector<SurfacePoint> pts;
      for (const auto& p : lift_blocking_to_cover(m, *cover, base).points)
        if (!is_blocking_point(m, p)) pts.push_back(p);
      candidates.push_back({kind + " " + label, pts});
    };
    for (int n = 2; n <= 4; ++n) {
      if (px == py) {
        add_lift("diagonal n=" + std::to_string(n), torus_blocking_set_diagonal(px, n));
        continue;
      }
      for (int a = 1; a < n; ++a)
        if (std::gcd(n, a) == 1)
          add_lift("n=" + std::to_string(n) + " a=" + std::to_string(a), torus_blocking_set(px, py, n, a));
    }
  }
  try {
    AffineAuto h = hyperelliptic_involution(m);
    if (!(x == y) && h.apply(m, x) == y) candidates.push_back({"weierstrass", weierstrass_points(m)});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotApplicable) throw;
  }

  for (const auto& [label, pts] : candidates) {
    if (std::find(pts.begin(), pts.end(), x) != pts.end() || std::find(pts.begin(), pts.end(), y) != pts.end())
      continue;
    if (r.upper && static_cast<int>(pts.size()) >= *r.upper) continue;
    if (!verify_blocking(m, segs, pts).blocked) continue;
    r.upper = static_cast<int>(pts.size());
    r.upper_set = pts;
    r.upper_source = label;
    r.upper_kind = BlockingReport::UpperKind::LengthBounded;
  }
  return r;
}

}  // namespace flatblock

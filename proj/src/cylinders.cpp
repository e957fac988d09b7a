#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "flatblock/tracer.h"
#include "walk.h"

namespace flatblock {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<Vec2> clip_below(const std::vector<Vec2>& poly, const Scalar& h, bool keep_below) {
  std::vector<Vec2> out;
  const size_t n = poly.size();
  auto inside = [&](const Vec2& p) { return keep_below ? p.y <= h : p.y >= h; };
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    bool ip = inside(p), iq = inside(q);
    if (ip) out.push_back(p);
    if (ip != iq) {
      Scalar t = (h - p.y) / (q.y - p.y);
      out.push_back({p.x + t * (q.x - p.x), h});
    }
  }
  return out;
}

Scalar polygon_area(const std::vector<Vec2>& poly) {
  Scalar twice(0);
  for (size_t i = 0; i < poly.size(); ++i) twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  return twice / 2;
}

Piece map_piece(const Piece& p, const Mat2& g) { return {p.face, g * p.from, g * p.to, g * p.offset, p.along_edge}; }

Segment as_segment(const Surface& m, int from_class, const TraceResult& t, const Mat2& back) {
  Segment s;
  s.start = vertex_point(m, from_class);
  s.end = t.point;
  s.holonomy = back * t.holonomy;
  s.length_sq = norm_sq(s.holonomy);
  s.crossings = t.crossings;
  for (const auto& p : t.pieces) s.pieces.push_back(map_piece(p, back));
  return s;
}

// Heights where the strips of a face change, and the saddle heights that
// vertical merging must not cross.
struct FaceStrips {
  std::vector<Scalar> heights;
  std::set<Scalar> saddle;

  int strip_at(const Scalar& y) const {
    auto it = std::upper_bound(heights.begin(), heights.end(), y);
    int idx = static_cast<int>(it - heights.begin()) - 1;
    return std::clamp(idx, 0, static_cast<int>(heights.size()) - 2);
  }
};

}  // namespace

CylinderDecomposition cylinder_decomposition(const Surface& m, const Vec2& dir, std::optional<Scalar> max_len_sq) {
  if (dir.is_zero()) throw Error(ErrorCode::ZeroDirection, "direction is zero");
  const Scalar dir_sq = norm_sq(dir);
  const Mat2 g{dir.x, dir.y, -dir.y, dir.x};
  const Mat2 back{dir.x / dir_sq, -dir.y / dir_sq, dir.y / dir_sq, dir.x / dir_sq};
  Surface h = gl2_act(m, g);
  if (!h.has_blocking_vertices()) {
    RawSurface raw = h.raw();
    raw.marked.push_back(h.vertex_class_info(0).corners.front());
    h = Surface::build(raw);
  }

  Scalar cap;
  if (max_len_sq) {
    cap = *max_len_sq * dir_sq;
  } else {
    double perimeter = 0;
    for (int f = 0; f < h.num_faces(); ++f)
      for (int i = 0; i < h.num_sides(f); ++i) perimeter += std::sqrt(norm_sq(h.edge_vector({f, i})).to_double());
    cap = Scalar(static_cast<long>(std::ceil(std::pow(64 * perimeter, 2))));
  }

  CylinderDecomposition out;
  out.direction = dir;
  const Vec2 east(1, 0);
  std::vector<TraceResult> prongs;
  std::vector<int> prong_class;
  for (int c = 0; c < static_cast<int>(h.vertex_classes().size()); ++c) {
    if (!h.vertex_class_info(c).blocking()) continue;
    for (const auto& corner : h.vertex_class_info(c).corners) {
      auto [o, i] = corner_sector(h, corner);
      if (!in_corner_sector(o, i, east)) continue;
      TraceResult t = trace(h, vertex_point(h, c), east, cap, corner);
      if (!t.stopped_at_singularity) {
        t.holonomy = back * t.holonomy;
        for (auto& p : t.pieces) p = map_piece(p, back);
        t.length_sq = norm_sq(t.holonomy);
        out.witness = std::move(t);
        return out;
      }
      prongs.push_back(std::move(t));
      prong_class.push_back(c);
    }
  }

  const int nf = h.num_faces();
  std::vector<FaceStrips> faces(nf);
  for (int f = 0; f < nf; ++f)
    for (const auto& v : h.face(f)) faces[f].heights.push_back(v.y);
  for (const auto& t : prongs)
    for (const auto& p : t.pieces) {
      faces[p.face].heights.push_back(p.from.y);
      faces[p.face].saddle.insert(p.from.y);
      if (!p.along_edge) continue;
      for (int k = 0; k < h.num_sides(p.face); ++k) {
        EdgeRef e{p.face, k};
        Vec2 a = h.vertex(p.face, k);
        if (!h.edge_vector(e).y.is_zero() || a.y != p.from.y) continue;
        EdgeRef q = h.partner(e);
        Scalar y = p.from.y + h.gluing_translation(e).y;
        faces[q.face].heights.push_back(y);
        faces[q.face].saddle.insert(y);
      }
    }
  std::vector<int> first_strip(nf + 1, 0);
  for (int f = 0; f < nf; ++f) {
    auto& hs = faces[f].heights;
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    first_strip[f + 1] = first_strip[f] + static_cast<int>(hs.size()) - 1;
  }
  const int strips = first_strip[nf];
  UnionFind uf(strips);

  for (int f = 0; f < nf; ++f) {
    const auto& fs = faces[f];
    const int count = static_cast<int>(fs.heights.size()) - 1;
    for (int k = 0; k + 1 < count; ++k)
      if (!fs.saddle.count(fs.heights[k + 1])) uf.unite(first_strip[f] + k, first_strip[f] + k + 1);
    const Scalar& top = fs.heights.back();
    for (int k = 0; k < h.num_sides(f); ++k) {
      Vec2 e = h.edge_vector({f, k});
      if (!e.y.is_zero() || e.x.sign() > 0 || h.vertex(f, k).y != top) continue;
      if (fs.saddle.count(top)) continue;
      uf.unite(first_strip[f] + count - 1, first_strip[h.partner({f, k}).face]);
    }
  }

  std::vector<std::optional<Scalar>> leaf_length(strips);
  for (int f = 0; f < nf; ++f) {
    const auto& hs = faces[f].heights;
    for (int k = 0; k + 1 < static_cast<int>(hs.size()); ++k) {
      Scalar ym = (hs[k] + hs[k + 1]) / 2;
      std::vector<Scalar> xs;
      const auto& poly = h.face(f);
      for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        if ((p.y - ym).sign() * (q.y - ym).sign() < 0) xs.push_back(p.x + (ym - p.y) * (q.x - p.x) / (q.y - p.y));
      }
      Vec2 start((xs.front() + xs.back()) / 2, ym);
      detail::Walk w;
      w.face = f;
      w.pos = start;
      w.offset = Vec2(0, 0);
      w.dir = east;
      w.origin = start;
      std::optional<Scalar> length;
      auto on_piece = [&](const detail::Walk& st, int face, const Vec2& from, const Vec2& to, int) {
        uf.unite(first_strip[f] + k, first_strip[face] + faces[face].strip_at(from.y));
        if (face == f && from.y == ym && start.x > from.x && start.x <= to.x && !st.pieces.empty()) {
          length = start.x + st.offset.x - st.origin.x;
          return false;
        }
        return true;
      };
      detail::walk(h, w, cap, on_piece, nullptr, 10'000'000);
      if (!length) throw Error(ErrorCode::PreconditionFailed, "horizontal leaf did not close within the budget");
      leaf_length[first_strip[f] + k] = length;
    }
  }

  std::map<int, int> cyl_of_root;
  std::vector<int> cyl_of_strip(strips);
  for (int s = 0; s < strips; ++s) {
    int r = uf.find(s);
    if (!cyl_of_root.count(r)) {
      int id = static_cast<int>(out.cylinders.size());
      cyl_of_root[r] = id;
      Cylinder c;
      c.area = 0;
      Scalar lambda = *leaf_length[s] / dir_sq;
      c.scale = lambda;
      c.holonomy = lambda * dir;
      c.circumference_sq = lambda * lambda * dir_sq;
      out.cylinders.push_back(c);
    }
    cyl_of_strip[s] = cyl_of_root[r];
  }
  for (int f = 0; f < nf; ++f) {
    const auto& hs = faces[f].heights;
    for (int k = 0; k + 1 < static_cast<int>(hs.size()); ++k) {
      auto band = clip_below(clip_below(h.face(f), hs[k], false), hs[k + 1], true);
      out.cylinders[cyl_of_strip[first_strip[f] + k]].area += polygon_area(band) / dir_sq;
    }
  }
  for (auto& c : out.cylinders) c.height_sq = c.area * c.area / c.circumference_sq;

  for (size_t i = 0; i < prongs.size(); ++i) {
    const auto& t = prongs[i];
    out.saddles.push_back(as_segment(m, prong_class[i], t, back));
    int above = -1, below = -1;
    auto it = std::find_if(t.pieces.begin(), t.pieces.end(), [](const Piece& p) { return !p.along_edge; });
    if (it != t.pieces.end()) {
      const auto& fs = faces[it->face];
      int k = static_cast<int>(std::lower_bound(fs.heights.begin(), fs.heights.end(), it->from.y) - fs.heights.begin());
      if (k + 1 < static_cast<int>(fs.heights.size())) above = first_strip[it->face] + k;
      if (k > 0) below = first_strip[it->face] + k - 1;
    } else {
      const Piece& p = t.pieces.front();
      for (int k = 0; k < h.num_sides(p.face); ++k) {
        Vec2 e = h.edge_vector({p.face, k});
        if (!e.y.is_zero() || h.vertex(p.face, k).y != p.from.y) continue;
        int own = e.x.sign() > 0 ? first_strip[p.face] : first_strip[p.face + 1] - 1;
        int q = h.partner({p.face, k}).face;
        int other = e.x.sign() > 0 ? first_strip[q + 1] - 1 : first_strip[q];
        above = e.x.sign() > 0 ? own : other;
        below = e.x.sign() > 0 ? other : own;
      }
    }
    if (above >= 0) out.cylinders[cyl_of_strip[above]].bottom.push_back(static_cast<int>(i));
    if (below >= 0) out.cylinders[cyl_of_strip[below]].top.push_back(static_cast<int>(i));
  }
  for (const auto& c : out.cylinders) out.ratios.push_back(c.scale / out.cylinders.front().scale);
  out.complete = true;
  return out;
}

PeriodicityVerdict purely_periodic_in_direction(const Surface& m, const Vec2& dir, std::optional<Scalar> max_len_sq) {
  PeriodicityVerdict v;
  v.decomposition = cylinder_decomposition(m, dir, max_len_sq);
  if (!v.decomposition.complete) return v;
  v.kind = PeriodicityVerdict::Kind::Yes;
  for (size_t i = 1; i < v.decomposition.ratios.size(); ++i)
    if (!v.decomposition.ratios[i].is_rational()) {
      v.kind = PeriodicityVerdict::Kind::No;
      v.witness = {0, static_cast<int>(i)};
      break;
    }
  return v;
}

}  // namespace flatblock

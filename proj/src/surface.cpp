#include "flatblock/surface.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <queue>

namespace flatblock {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

void check_field(long d, const Scalar& s) {
  if (s.field() != 1 && s.field() != d && !s.is_rational())
    throw Error(ErrorCode::FieldMismatch, "coordinate " + s.str() + " is not in Q(sqrt " + std::to_string(d) + ")");
}

}  // namespace

bool in_corner_sector(const Vec2& out, const Vec2& in, const Vec2& dir) {
  if (same_direction(out, dir)) return true;
  return cross(out, dir).sign() > 0 && cross(dir, in).sign() > 0;
}

std::pair<Vec2, Vec2> corner_sector(const Surface& m, CornerRef c) {
  const Vec2& v = m.vertex(c.face, c.corner);
  return {m.vertex(c.face, c.corner + 1) - v, m.vertex(c.face, c.corner - 1) - v};
}

const Vec2& Surface::vertex(int f, int i) const {
  const auto& poly = faces_.at(f);
  return poly[wrap(i, static_cast<int>(poly.size()))];
}

Vec2 Surface::edge_vector(EdgeRef e) const { return vertex(e.face, e.edge + 1) - vertex(e.face, e.edge); }

Vec2 Surface::gluing_translation(EdgeRef e) const {
  EdgeRef p = partner(e);
  // The partner's start vertex is glued to this side's end vertex.
  return vertex(p.face, p.edge) - vertex(e.face, e.edge + 1);
}

bool Surface::has_blocking_vertices() const {
  return std::any_of(classes_.begin(), classes_.end(), [](const VertexClass& c) { return c.blocking(); });
}

Surface Surface::with_cover(CoverData cover) const {
  Surface s(*this);
  s.cover_ = std::move(cover);
  return s;
}

Surface Surface::with_name(std::string name) const {
  Surface s(*this);
  s.name_ = std::move(name);
  return s;
}

RawSurface Surface::raw() const {
  RawSurface r;
  r.field_d = d_;
  r.faces = faces_;
  r.name = name_;
  for (int f = 0; f < num_faces(); ++f)
    for (int i = 0; i < num_sides(f); ++i) {
      EdgeRef e{f, i};
      EdgeRef p = partner(e);
      if (e < p) r.gluings.emplace_back(e, p);
    }
  for (const auto& cls : classes_)
    if (cls.marked) r.marked.push_back(cls.corners.front());
  return r;
}

Surface Surface::build(const RawSurface& raw) {
  if (!is_square_free(raw.field_d))
    throw Error(ErrorCode::FieldMismatch, "field_d must be square-free, got " + std::to_string(raw.field_d));
  if (raw.faces.empty()) throw Error(ErrorCode::BadGluing, "surface has no faces");

  Surface s;
  s.d_ = raw.field_d;
  s.faces_ = raw.faces;
  s.name_ = raw.name;
  const int nf = s.num_faces();

  s.area_ = 0;
  for (int f = 0; f < nf; ++f) {
    const auto& poly = s.faces_[f];
    const int n = static_cast<int>(poly.size());
    if (n < 3) throw Error(ErrorCode::NonConvexFace, "face " + std::to_string(f) + " has fewer than 3 vertices");
    for (const auto& v : poly) {
      check_field(s.d_, v.x);
      check_field(s.d_, v.y);
    }
    for (int i = 0; i < n; ++i) {
      Vec2 side = poly[wrap(i + 1, n)] - poly[i];
      for (int j = 0; j < n; ++j) {
        if (j == i || j == wrap(i + 1, n)) continue;
        if (cross(side, poly[j] - poly[i]).sign() <= 0)
          throw Error(ErrorCode::NonConvexFace, "face " + std::to_string(f) + " is not strictly convex and counterclockwise");
      }
    }
    Scalar twice(0);
    for (int i = 0; i < n; ++i) twice += cross(poly[i], poly[wrap(i + 1, n)]);
    s.face_area_.push_back(twice / 2);
    s.area_ += s.face_area_.back();
  }

  s.partner_.resize(nf);
  for (int f = 0; f < nf; ++f) s.partner_[f].assign(s.faces_[f].size(), EdgeRef{});
  auto valid = [&](EdgeRef e) {
    return e.face >= 0 && e.face < nf && e.edge >= 0 && e.edge < s.num_sides(e.face);
  };
  for (const auto& [a, b] : raw.gluings) {
    if (!valid(a) || !valid(b)) throw Error(ErrorCode::BadGluing, "gluing refers to a missing side");
    if (a == b) throw Error(ErrorCode::BadGluing, "side glued to itself");
    if (s.partner_[a.face][a.edge].face >= 0 || s.partner_[b.face][b.edge].face >= 0)
      throw Error(ErrorCode::BadGluing, "side glued twice");
    if (!(s.edge_vector(a) + s.edge_vector(b)).is_zero())
      throw Error(ErrorCode::NonParallelGluing, "sides " + std::to_string(a.face) + ":" + std::to_string(a.edge) +
                                                   " and " + std::to_string(b.face) + ":" + std::to_string(b.edge) +
                                                   " are not opposite translates");
    s.partner_[a.face][a.edge] = b;
    s.partner_[b.face][b.edge] = a;
  }
  for (int f = 0; f < nf; ++f)
    for (int i = 0; i < s.num_sides(f); ++i)
      if (s.partner_[f][i].face < 0)
        throw Error(ErrorCode::BadGluing, "side " + std::to_string(f) + ":" + std::to_string(i) + " is not glued");
  s.edge_pairs_ = static_cast<int>(raw.gluings.size());

  std::vector<bool> seen(nf, false);
  std::queue<int> todo;
  todo.push(0);
  seen[0] = true;
  int reached = 1;
  while (!todo.empty()) {
    int f = todo.front();
    todo.pop();
    for (const auto& p : s.partner_[f])
      if (!seen[p.face]) {
        seen[p.face] = true;
        ++reached;
        todo.push(p.face);
      }
  }
  if (reached != nf) throw Error(ErrorCode::Disconnected, "face adjacency graph is disconnected");

  // Walk corner cycles counterclockwise: crossing the incoming side of
  // corner (f, i) lands on the partner side's start corner.
  s.corner_class_.resize(nf);
  for (int f = 0; f < nf; ++f) s.corner_class_[f].assign(s.faces_[f].size(), -1);
  const Vec2 east(1, 0);
  for (int f = 0; f < nf; ++f)
    for (int i = 0; i < s.num_sides(f); ++i) {
      if (s.corner_class_[f][i] >= 0) continue;
      VertexClass cls;
      const int id = static_cast<int>(s.classes_.size());
      CornerRef c{f, i};
      int count = 0;
      while (s.corner_class_[c.face][c.corner] < 0) {
        s.corner_class_[c.face][c.corner] = id;
        cls.corners.push_back(c);
        auto [out, in] = corner_sector(s, c);
        if (in_corner_sector(out, in, east)) ++count;
        EdgeRef next = s.partner({c.face, wrap(c.corner - 1, s.num_sides(c.face))});
        c = {next.face, next.edge};
      }
      if (c != cls.corners.front())
        throw Error(ErrorCode::BadGluing, "corner cycle does not close");
      if (count == 0) throw Error(ErrorCode::BadGluing, "vertex with zero cone angle");
      cls.multiplicity = count;
      s.classes_.push_back(std::move(cls));
    }

  for (const auto& c : raw.marked) {
    if (c.face < 0 || c.face >= nf || c.corner < 0 || c.corner >= s.num_sides(c.face))
      throw Error(ErrorCode::BadGluing, "marked vertex refers to a missing corner");
    s.classes_[s.corner_class_[c.face][c.corner]].marked = true;
  }

  const int v = static_cast<int>(s.classes_.size());
  const int chi = v - s.edge_pairs_ + nf;
  if (chi % 2 != 0 || chi > 2) throw Error(ErrorCode::BadGluing, "Euler characteristic " + std::to_string(chi));
  s.genus_ = (2 - chi) / 2;
  int excess = 0;
  for (const auto& cls : s.classes_) excess += cls.multiplicity - 1;
  if (excess != 2 * s.genus_ - 2)
    throw Error(ErrorCode::BadGluing, "cone angles violate Gauss-Bonnet: sum(k-1) = " + std::to_string(excess) +
                                          ", genus " + std::to_string(s.genus_));
  return s;
}

// ---------------------------------------------------------------- points

std::strong_ordering operator<=>(const SurfacePoint& l, const SurfacePoint& r) {
  if (auto c = static_cast<int>(l.kind) <=> static_cast<int>(r.kind); c != 0) return c;
  if (l.kind == PointKind::Vertex) return l.index <=> r.index;
  if (auto c = l.face <=> r.face; c != 0) return c;
  if (auto c = l.index <=> r.index; c != 0) return c;
  return l.pos <=> r.pos;
}

SurfacePoint vertex_point(const Surface& m, int vertex_class) {
  const auto& cls = m.vertex_class_info(vertex_class);
  CornerRef c = cls.corners.front();
  return {PointKind::Vertex, c.face, vertex_class, m.vertex(c.face, c.corner)};
}

SurfacePoint locate(const Surface& m, int face, const Vec2& pos) {
  if (face < 0 || face >= m.num_faces())
    throw Error(ErrorCode::PreconditionFailed, "no face " + std::to_string(face));
  const int n = m.num_sides(face);
  // Clearly interior by a floating estimate with a wide margin.
  {
    const double px = pos.x.to_double(), py = pos.y.to_double();
    bool inside = true;
    for (int i = 0; i < n && inside; ++i) {
      const Vec2 &a = m.vertex(face, i), &b = m.vertex(face, (i + 1) % n);
      double ax = a.x.to_double(), ay = a.y.to_double(), bx = b.x.to_double(), by = b.y.to_double();
      double o = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
      double scale = (std::fabs(bx - ax) + std::fabs(by - ay) + 1.0) * (std::fabs(px - ax) + std::fabs(py - ay) + 1.0);
      inside = o > 1e-9 * scale;
    }
    if (inside) return {PointKind::Interior, face, -1, pos};
  }
  for (int i = 0; i < n; ++i)
    if (m.vertex(face, i) == pos) return vertex_point(m, m.vertex_class({face, i}));
  int on_side = -1;
  for (int i = 0; i < n; ++i) {
    int s = cross(m.edge_vector({face, i}), pos - m.vertex(face, i)).sign();
    if (s < 0)
      throw Error(ErrorCode::PreconditionFailed, pos.str() + " is outside face " + std::to_string(face));
    if (s == 0) on_side = i;
  }
  if (on_side < 0) return {PointKind::Interior, face, -1, pos};
  EdgeRef e{face, on_side};
  EdgeRef p = m.partner(e);
  if (p < e) return {PointKind::Edge, p.face, p.edge, pos + m.gluing_translation(e)};
  return {PointKind::Edge, face, on_side, pos};
}

std::vector<LocalCopy> local_copies(const Surface& m, const SurfacePoint& p) {
  switch (p.kind) {
    case PointKind::Interior:
      return {{p.face, p.pos}};
    case PointKind::Edge: {
      EdgeRef e{p.face, p.index};
      return {{p.face, p.pos}, {m.partner(e).face, p.pos + m.gluing_translation(e)}};
    }
    case PointKind::Vertex: {
      std::vector<LocalCopy> out;
      for (const auto& c : m.vertex_class_info(p.index).corners) out.push_back({c.face, m.vertex(c.face, c.corner)});
      return out;
    }
  }
  return {};
}

bool is_blocking_point(const Surface& m, const SurfacePoint& p) {
  return p.kind == PointKind::Vertex && m.vertex_class_info(p.index).blocking();
}

std::string format_point(const SurfacePoint& p) {
  if (p.kind == PointKind::Vertex) return "v" + std::to_string(p.index);
  return std::to_string(p.face) + ":" + p.pos.str();
}

SurfacePoint parse_point(const Surface& m, std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  auto parse_class = [&](const std::string& digits) {
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
      throw Error(ErrorCode::ParseError, "bad vertex reference '" + s + "'");
    int id = std::stoi(digits);
    if (id >= static_cast<int>(m.vertex_classes().size()))
      throw Error(ErrorCode::PreconditionFailed, "no vertex class " + digits);
    return vertex_point(m, id);
  };
  if (s.rfind("vertex:", 0) == 0) return parse_class(s.substr(7));
  if (!s.empty() && s[0] == 'v') return parse_class(s.substr(1));
  auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "expected f:(x,y), got '" + s + "'");
  std::string face = s.substr(0, colon);
  if (face.empty() || !std::all_of(face.begin(), face.end(), ::isdigit))
    throw Error(ErrorCode::ParseError, "bad face index in '" + s + "'");
  return locate(m, std::stoi(face), parse_vec2(s.substr(colon + 1)));
}

// ---------------------------------------------------------------- action

Surface gl2_act(const Surface& m, const Mat2& g) {
  Scalar det = g.det();
  if (det.sign() <= 0) throw Error(ErrorCode::NonPositiveDeterminant, "det = " + det.str());
  for (const Scalar* e : {&g.a, &g.b, &g.c, &g.d})
    if (!e->is_rational() && e->field() != m.field())
      throw Error(ErrorCode::FieldMismatch, "matrix entry " + e->str() + " outside the surface field");
  RawSurface raw = m.raw();
  for (auto& poly : raw.faces)
    for (auto& v : poly) v = g * v;
  Surface out = Surface::build(raw);
  if (m.cover()) {
    CoverData c = *m.cover();
    c.u = g * c.u;
    c.w = g * c.w;
    for (auto& o : c.face_offsets) o = g * o;
    out = out.with_cover(std::move(c));
  }
  return out;
}

}  // namespace flatblock

#include "flatblock/tracer.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "walk.h"

namespace flatblock {

// ---------------------------------------------------------------- records

std::strong_ordering operator<=>(const Crossing& l, const Crossing& r) {
  if (auto c = l.face <=> r.face; c != 0) return c;
  if (auto c = l.edge <=> r.edge; c != 0) return c;
  if (auto c = static_cast<int>(l.kind) <=> static_cast<int>(r.kind); c != 0) return c;
  return l.t <=> r.t;
}

std::string Crossing::str() const {
  switch (kind) {
    case Kind::Edge: return std::to_string(face) + ":" + std::to_string(edge) + "@" + t.str();
    case Kind::Vertex: return "v" + std::to_string(face);
    case Kind::AlongEdge: return std::to_string(face) + ":" + std::to_string(edge) + "~";
  }
  return "?";
}

std::strong_ordering operator<=>(const Piece& l, const Piece& r) {
  if (auto c = l.face <=> r.face; c != 0) return c;
  if (auto c = l.from <=> r.from; c != 0) return c;
  if (auto c = l.to <=> r.to; c != 0) return c;
  if (auto c = l.offset <=> r.offset; c != 0) return c;
  return l.along_edge <=> r.along_edge;
}

std::strong_ordering operator<=>(const Segment& l, const Segment& r) {
  if (auto c = l.length_sq <=> r.length_sq; c != 0) return c;
  if (auto c = std::lexicographical_compare_three_way(l.crossings.begin(), l.crossings.end(), r.crossings.begin(),
                                                      r.crossings.end());
      c != 0)
    return c;
  if (auto c = l.holonomy <=> r.holonomy; c != 0) return c;
  if (auto c = std::lexicographical_compare_three_way(l.pieces.begin(), l.pieces.end(), r.pieces.begin(), r.pieces.end());
      c != 0)
    return c;
  if (auto c = l.start <=> r.start; c != 0) return c;
  return l.end <=> r.end;
}

std::string Segment::str() const {
  std::string out = "len_sq=" + length_sq.str() + " hol=" + holonomy.str() + " crossings=[";
  for (size_t i = 0; i < crossings.size(); ++i) out += (i ? "," : "") + crossings[i].str();
  return out + "]";
}

Crossing parse_crossing(std::string_view text) {
  Crossing c;
  auto bad = [&] { return Error(ErrorCode::ParseError, "bad crossing '" + std::string(text) + "'"); };
  auto to_int = [&](std::string_view s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) throw bad();
    return std::stoi(std::string(s));
  };
  if (!text.empty() && text.front() == 'v') {
    c.kind = Crossing::Kind::Vertex;
    c.face = to_int(text.substr(1));
    return c;
  }
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw bad();
  c.face = to_int(text.substr(0, colon));
  std::string_view rest = text.substr(colon + 1);
  if (!rest.empty() && rest.back() == '~') {
    c.kind = Crossing::Kind::AlongEdge;
    c.edge = to_int(rest.substr(0, rest.size() - 1));
    return c;
  }
  auto at = rest.find('@');
  if (at == std::string_view::npos) throw bad();
  c.edge = to_int(rest.substr(0, at));
  c.t = Scalar::parse(rest.substr(at + 1));
  return c;
}

SegmentRecord parse_segment_record(std::string_view line) {
  auto bad = [&] { return Error(ErrorCode::ParseError, "bad segment record '" + std::string(line) + "'"); };
  if (line.rfind("len_sq=", 0) != 0) throw bad();
  auto hol = line.find(" hol=");
  auto cr = line.find(" crossings=[");
  if (hol == std::string_view::npos || cr == std::string_view::npos || line.back() != ']') throw bad();
  SegmentRecord r;
  r.length_sq = Scalar::parse(line.substr(7, hol - 7));
  r.holonomy = parse_vec2(line.substr(hol + 5, cr - hol - 5));
  std::string_view list = line.substr(cr + 12, line.size() - cr - 13);
  while (!list.empty()) {
    auto comma = list.find(',');
    r.crossings.push_back(parse_crossing(list.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return r;
}

// ---------------------------------------------------------------- walking

namespace detail {

Step step(const Surface& m, int face, const Vec2& pos, const Vec2& dir) {
  const int n = m.num_sides(face);
  std::optional<Scalar> best;
  for (int j = 0; j < n; ++j) {
    Vec2 e = m.edge_vector({face, j});
    Scalar c = cross(e, dir);
    if (c.sign() >= 0) continue;
    Scalar lambda = cross(e, pos - m.vertex(face, j)) / -c;
    if (!best || lambda < *best) best = lambda;
  }
  if (!best || best->sign() <= 0) throw Error(ErrorCode::PreconditionFailed, "direction leaves the face immediately");
  Step s;
  s.exit = pos + *best * dir;
  for (int j = 0; j < n; ++j) {
    Vec2 e = m.edge_vector({face, j});
    if (cross(e, dir).is_zero() && cross(e, pos - m.vertex(face, j)).is_zero()) s.along = j;
  }
  for (int j = 0; j < n; ++j)
    if (m.vertex(face, j) == s.exit) {
      s.at_vertex = true;
      s.index = j;
      return s;
    }
  for (int j = 0; j < n; ++j) {
    Vec2 e = m.edge_vector({face, j});
    if (cross(e, dir).sign() < 0 && cross(e, s.exit - m.vertex(face, j)).is_zero()) {
      s.index = j;
      return s;
    }
  }
  throw Error(ErrorCode::PreconditionFailed, "exit point not on the face boundary");
}

CornerRef sector_corner(const Surface& m, int vertex_class, const Vec2& dir) {
  for (const auto& c : m.vertex_class_info(vertex_class).corners) {
    auto [out, in] = corner_sector(m, c);
    if (in_corner_sector(out, in, dir)) return c;
  }
  throw Error(ErrorCode::PreconditionFailed, "no corner sector contains " + dir.str());
}

Piece canonical_piece(const Surface& m, int face, const Vec2& from, const Vec2& to, const Vec2& offset, int along) {
  if (along < 0) return {face, from, to, offset, false};
  EdgeRef e{face, along};
  EdgeRef p = m.partner(e);
  if (!(p < e)) return {face, from, to, offset, true};
  Vec2 t = m.gluing_translation(e);
  return {p.face, from + t, to + t, offset - t, true};
}

namespace {

Crossing along_crossing(const Surface& m, int face, int along) {
  EdgeRef e{face, along};
  EdgeRef p = m.partner(e);
  EdgeRef low = p < e ? p : e;
  return {Crossing::Kind::AlongEdge, low.face, low.edge, Scalar(0)};
}

}  // namespace

WalkOutcome walk(const Surface& m, Walk& w, const Scalar& budget, const PieceFn& on_piece, const VertexFn& on_vertex,
                 long max_steps) {
  for (long steps = 0; steps < max_steps; ++steps) {
    if (norm_sq(w.pos + w.offset - w.origin) > budget) return {WalkStop::Budget, -1};
    Step s = step(m, w.face, w.pos, w.dir);
    if (s.along >= 0) w.crossings.push_back(along_crossing(m, w.face, s.along));
    if (on_piece && !on_piece(w, w.face, w.pos, s.exit, s.along)) return {WalkStop::Callback, -1};
    w.pieces.push_back(canonical_piece(m, w.face, w.pos, s.exit, w.offset, s.along));
    if (s.at_vertex) {
      int cls = m.vertex_class({w.face, s.index});
      Vec2 developed = s.exit + w.offset;
      if (norm_sq(developed - w.origin) > budget) return {WalkStop::Budget, -1};
      if (on_vertex) on_vertex(w, cls, developed);
      if (m.vertex_class_info(cls).blocking()) return {WalkStop::BlockingVertex, cls};
      CornerRef c = sector_corner(m, cls, w.dir);
      w.crossings.push_back({Crossing::Kind::Vertex, cls, -1, Scalar(0)});
      w.face = c.face;
      w.pos = m.vertex(c.face, c.corner);
      w.offset = developed - w.pos;
    } else {
      EdgeRef e{w.face, s.index};
      Vec2 edge = m.edge_vector(e);
      Scalar t = dot(s.exit - m.vertex(e.face, e.edge), edge) / norm_sq(edge);
      w.crossings.push_back({Crossing::Kind::Edge, e.face, e.edge, t});
      Vec2 tau = m.gluing_translation(e);
      w.face = m.partner(e).face;
      w.pos = s.exit + tau;
      w.offset -= tau;
    }
  }
  return {WalkStop::Steps, -1};
}

}  // namespace detail

// ---------------------------------------------------------------- enumeration

namespace {

using detail::Walk;

struct Cone {
  Vec2 lo;
  Vec2 hi;
};

bool strictly_inside(const Cone& c, const Vec2& d) { return cross(c.lo, d).sign() > 0 && cross(d, c.hi).sign() > 0; }
bool inside_closed(const Cone& c, const Vec2& d) { return cross(c.lo, d).sign() >= 0 && cross(d, c.hi).sign() >= 0; }

std::optional<Cone> intersect(const Cone& a, const Cone& b) {
  Cone r{inside_closed(b, a.lo) ? a.lo : b.lo, inside_closed(b, a.hi) ? a.hi : b.hi};
  if (!inside_closed(a, r.lo) || !inside_closed(b, r.lo) || !inside_closed(a, r.hi) || !inside_closed(b, r.hi))
    return std::nullopt;
  if (cross(r.lo, r.hi).sign() <= 0) return std::nullopt;
  return r;
}

Scalar dist_sq_to_segment(const Vec2& x, const Vec2& p, const Vec2& q) {
  Vec2 d = q - p;
  Scalar len = norm_sq(d);
  if (len.is_zero()) return norm_sq(x - p);
  Scalar t = dot(x - p, d) / len;
  if (t.sign() <= 0) return norm_sq(x - p);
  if (t >= Scalar(1)) return norm_sq(x - q);
  return norm_sq(x - (p + t * d));
}

Vec2 ray_hit(const Vec2& x, const Vec2& dir, const Vec2& a, const Vec2& e) {
  return x + (cross(a - x, e) / cross(dir, e)) * dir;
}

struct Root {
  int face;
  Vec2 x;
  /// Full plane when absent.
  std::optional<Cone> cone;
  /// Directions handled by rays out of the root face.
  std::vector<Vec2> rays;
};

struct ChainLink {
  int face;
  Vec2 offset;
  int exit;
};

struct Node {
  int root;
  int face;
  Vec2 offset;
  int entry;
  Cone cone;
  std::vector<ChainLink> chain;
};

class Enumerator {
 public:
  Enumerator(const Surface& m, const SurfacePoint& x, const SurfacePoint& y, const Scalar& budget, long max_nodes)
      : m_(m), x_(x), y_(y), budget_(budget), max_nodes_(max_nodes) {
    if (y.kind != PointKind::Vertex) {
      y_local_.resize(m.num_faces());
      for (const auto& c : local_copies(m, y)) y_local_[c.face].push_back(c.pos);
    }
    build_roots();
  }

  const std::vector<Root>& roots() const { return roots_; }

  void root_tasks(std::vector<Node>& nodes, std::vector<std::pair<int, Vec2>>& rays) {
    for (int r = 0; r < static_cast<int>(roots_.size()); ++r) {
      const Root& root = roots_[r];
      for (const auto& d : root.rays) rays.emplace_back(r, d);
      for (const auto& yl : y_local_.empty() ? std::vector<Vec2>{} : y_local_[root.face]) {
        Vec2 d = yl - root.x;
        if (d.is_zero() || norm_sq(d) > budget_) continue;
        if (root.cone && !strictly_inside(*root.cone, d)) continue;
        if (std::any_of(root.rays.begin(), root.rays.end(), [&](const Vec2& r) { return same_direction(r, d); }))
          continue;
        record_chain(r, {}, root.face, Vec2(0, 0), yl, d);
      }
      expand(r, root.face, Vec2(0, 0), -1, root.cone, {}, nodes);
    }
  }

  void run_node(const Node& n) {
    if (++*counter_ > max_nodes_)
      throw Error(ErrorCode::BudgetTooLargeGuard, "unfolding tree exceeded " + std::to_string(max_nodes_) + " nodes");
    const Root& root = roots_[n.root];
    const int f = n.face;
    const int sides = m_.num_sides(f);
    if (!y_local_.empty()) {
      Vec2 ein = m_.edge_vector({f, n.entry});
      for (const auto& yl : y_local_[f]) {
        if (cross(ein, yl - m_.vertex(f, n.entry)).is_zero()) continue;
        Vec2 d = yl + n.offset - root.x;
        if (!strictly_inside(n.cone, d) || norm_sq(d) > budget_) continue;
        record_chain(n.root, n.chain, f, n.offset, yl, d);
      }
    }
    for (int j = 0; j < sides; ++j) {
      if (j == n.entry || j == (n.entry + 1) % sides) continue;
      Vec2 d = m_.vertex(f, j) + n.offset - root.x;
      if (!strictly_inside(n.cone, d) || norm_sq(d) > budget_) continue;
      int cls = m_.vertex_class({f, j});
      if (y_.kind == PointKind::Vertex && cls == y_.index) record_chain(n.root, n.chain, f, n.offset, m_.vertex(f, j), d);
      if (!m_.vertex_class_info(cls).blocking()) run_ray(n.root, d, norm_sq(d));
    }
    std::vector<Node> children;
    expand(n.root, f, n.offset, n.entry, n.cone, n.chain, children);
    for (const auto& c : children) run_node(c);
  }

  void run_ray(int r, const Vec2& dir, const Scalar& record_after) {
    const Root& root = roots_[r];
    Walk w;
    w.face = root.face;
    w.pos = root.x;
    w.offset = Vec2(0, 0);
    w.dir = dir;
    w.origin = root.x;
    auto on_piece = [&](const Walk& st, int face, const Vec2& from, const Vec2& to, int along) {
      if (y_local_.empty()) return true;
      for (const auto& yl : y_local_[face]) {
        Vec2 rel = yl - from;
        if (!cross(dir, rel).is_zero() || dot(dir, rel).sign() <= 0 || dot(dir, yl - to).sign() > 0) continue;
        Vec2 d = yl + st.offset - root.x;
        if (dot(d, dir) <= record_after || norm_sq(d) > budget_) continue;
        Segment s;
        s.pieces = st.pieces;
        s.pieces.push_back(detail::canonical_piece(m_, face, from, yl, st.offset, along));
        s.crossings = st.crossings;
        finish(s, d);
      }
      return true;
    };
    auto on_vertex = [&](const Walk& st, int cls, const Vec2& developed) {
      if (y_.kind != PointKind::Vertex || cls != y_.index) return;
      Vec2 d = developed - root.x;
      if (dot(d, dir) <= record_after) return;
      Segment s;
      s.pieces = st.pieces;
      s.crossings = st.crossings;
      finish(s, d);
    };
    detail::walk(m_, w, budget_, on_piece, on_vertex, max_nodes_);
  }

  std::vector<Segment> take() { return std::move(found_); }

  /// Copy sharing roots and the node counter, with its own results.
  Enumerator fork() const { return Enumerator(*this, 0); }
  void use_counter(std::atomic<long>* c) { counter_ = c; }

 private:
  Enumerator(const Enumerator& o, int)
      : m_(o.m_), x_(o.x_), y_(o.y_), budget_(o.budget_), max_nodes_(o.max_nodes_), roots_(o.roots_),
        y_local_(o.y_local_), counter_(o.counter_) {}

  void build_roots() {
    switch (x_.kind) {
      case PointKind::Interior: {
        Root r{x_.face, x_.pos, std::nullopt, {}};
        for (int j = 0; j < m_.num_sides(x_.face); ++j) r.rays.push_back(m_.vertex(x_.face, j) - x_.pos);
        roots_.push_back(std::move(r));
        break;
      }
      case PointKind::Edge: {
        EdgeRef e{x_.face, x_.index};
        EdgeRef p = m_.partner(e);
        Vec2 ev = m_.edge_vector(e);
        Root a{e.face, x_.pos, Cone{ev, -ev}, {}};
        for (int j = 0; j < m_.num_sides(e.face); ++j) a.rays.push_back(m_.vertex(e.face, j) - x_.pos);
        Vec2 xg = x_.pos + m_.gluing_translation(e);
        Vec2 pv = m_.edge_vector(p);
        Root b{p.face, xg, Cone{pv, -pv}, {}};
        for (int j = 0; j < m_.num_sides(p.face); ++j)
          if (j != p.edge && j != (p.edge + 1) % m_.num_sides(p.face)) b.rays.push_back(m_.vertex(p.face, j) - xg);
        roots_.push_back(std::move(a));
        roots_.push_back(std::move(b));
        break;
      }
      case PointKind::Vertex: {
        for (const auto& c : m_.vertex_class_info(x_.index).corners) {
          auto [out, in] = corner_sector(m_, c);
          const int n = m_.num_sides(c.face);
          Vec2 xv = m_.vertex(c.face, c.corner);
          Root r{c.face, xv, Cone{out, in}, {}};
          for (int j = 0; j < n; ++j)
            if (j != c.corner && j != (c.corner + n - 1) % n) r.rays.push_back(m_.vertex(c.face, j) - xv);
          roots_.push_back(std::move(r));
        }
        break;
      }
    }
  }

  void expand(int r, int f, const Vec2& offset, int entry, const std::optional<Cone>& cone,
              const std::vector<ChainLink>& chain, std::vector<Node>& out) {
    const Root& root = roots_[r];
    const int sides = m_.num_sides(f);
    for (int j = 0; j < sides; ++j) {
      if (j == entry) continue;
      Vec2 a = m_.vertex(f, j) + offset;
      Vec2 b = m_.vertex(f, j + 1) + offset;
      Vec2 e = b - a;
      if (cross(e, root.x - a).sign() <= 0) continue;
      Cone edge{a - root.x, b - root.x};
      std::optional<Cone> child = cone ? intersect(*cone, edge) : std::optional<Cone>(edge);
      if (!child) continue;
      Vec2 plo = ray_hit(root.x, child->lo, a, e);
      Vec2 phi = ray_hit(root.x, child->hi, a, e);
      if (dist_sq_to_segment(root.x, plo, phi) > budget_) continue;
      EdgeRef ej{f, j};
      EdgeRef p = m_.partner(ej);
      Node n{r, p.face, offset - m_.gluing_translation(ej), p.edge, *child, chain};
      n.chain.push_back({f, offset, j});
      out.push_back(std::move(n));
    }
  }

  void record_chain(int r, const std::vector<ChainLink>& chain, int face, const Vec2& offset, const Vec2& y_local,
                    const Vec2& d) {
    const Root& root = roots_[r];
    Segment s;
    Vec2 prev = root.x;
    for (const auto& link : chain) {
      Vec2 a = m_.vertex(link.face, link.exit) + link.offset;
      Vec2 e = m_.edge_vector({link.face, link.exit});
      Vec2 hit = ray_hit(root.x, d, a, e);
      s.pieces.push_back({link.face, prev - link.offset, hit - link.offset, link.offset, false});
      s.crossings.push_back({Crossing::Kind::Edge, link.face, link.exit, dot(hit - a, e) / norm_sq(e)});
      prev = hit;
    }
    s.pieces.push_back({face, prev - offset, y_local, offset, false});
    finish(s, d);
  }

  void finish(Segment& s, const Vec2& d) {
    s.start = x_;
    s.end = y_;
    s.holonomy = d;
    s.length_sq = norm_sq(d);
    found_.push_back(std::move(s));
  }

 private:
  const Surface& m_;
  SurfacePoint x_;
  SurfacePoint y_;
  Scalar budget_;
  long max_nodes_;
  std::vector<Root> roots_;
  std::vector<std::vector<Vec2>> y_local_;
  std::vector<Segment> found_;
  std::atomic<long>* counter_ = nullptr;
};

}  // namespace

std::vector<Segment> segments_between(const Surface& m, const SurfacePoint& x, const SurfacePoint& y,
                                      const Scalar& max_len_sq, const EnumerationOptions& opts) {
  if (max_len_sq.sign() <= 0) return {};
  std::atomic<long> counter{0};
  Enumerator top(m, x, y, max_len_sq, opts.max_nodes);
  top.use_counter(&counter);
  std::vector<Node> nodes;
  std::vector<std::pair<int, Vec2>> rays;
  top.root_tasks(nodes, rays);

  const size_t tasks = nodes.size() + rays.size();
  const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(tasks)));
  std::atomic<size_t> next{0};
  std::vector<std::vector<Segment>> results(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](int id) {
    try {
      Enumerator e = top.fork();
      for (size_t k; (k = next++) < tasks;) {
        if (k < nodes.size()) {
          e.run_node(nodes[k]);
        } else {
          const auto& [r, d] = rays[k - nodes.size()];
          e.run_ray(r, d, Scalar(0));
        }
      }
      results[id] = e.take();
    } catch (...) {
      errors[id] = std::current_exception();
      next = tasks;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work, i);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Segment> out = top.take();
  for (auto& r : results)
    for (auto& s : r) out.push_back(std::move(s));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Segment> saddle_connections(const Surface& m, const Scalar& max_len_sq, const EnumerationOptions& opts) {
  std::vector<int> blocking;
  for (int c = 0; c < static_cast<int>(m.vertex_classes().size()); ++c)
    if (m.vertex_class_info(c).blocking()) blocking.push_back(c);
  if (blocking.empty()) throw Error(ErrorCode::NoSingularities, "surface has no singular or marked vertices");
  std::vector<Segment> out;
  for (int a : blocking)
    for (int b : blocking) {
      auto part = segments_between(m, vertex_point(m, a), vertex_point(m, b), max_len_sq, opts);
      out.insert(out.end(), part.begin(), part.end());
    }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- trace

TraceResult trace(const Surface& m, const SurfacePoint& start, const Vec2& dir, const Scalar& max_len_sq,
                  std::optional<CornerRef> sector) {
  if (dir.is_zero()) throw Error(ErrorCode::ZeroDirection, "direction is zero");
  Walk w;
  w.dir = dir;
  w.offset = Vec2(0, 0);
  switch (start.kind) {
    case PointKind::Interior:
      w.face = start.face;
      w.pos = start.pos;
      break;
    case PointKind::Edge: {
      EdgeRef e{start.face, start.index};
      if (cross(m.edge_vector(e), dir).sign() >= 0) {
        w.face = e.face;
        w.pos = start.pos;
      } else {
        w.face = m.partner(e).face;
        w.pos = start.pos + m.gluing_translation(e);
      }
      break;
    }
    case PointKind::Vertex: {
      CornerRef c;
      if (m.vertex_class_info(start.index).blocking()) {
        if (!sector) throw Error(ErrorCode::SectorRequired, "start is a singular vertex; give the corner sector");
        c = *sector;
        if (m.vertex_class(c) != start.index)
          throw Error(ErrorCode::PreconditionFailed, "sector corner is not at the start vertex");
        auto [out, in] = corner_sector(m, c);
        if (!in_corner_sector(out, in, dir))
          throw Error(ErrorCode::PreconditionFailed, "direction is outside the given corner sector");
      } else {
        c = detail::sector_corner(m, start.index, dir);
      }
      w.face = c.face;
      w.pos = m.vertex(c.face, c.corner);
      break;
    }
  }
  w.origin = w.pos;

  TraceResult result;
  std::optional<Scalar> lambda;  // budget point parameter along dir
  if (auto r = (max_len_sq / norm_sq(dir)).exact_sqrt()) lambda = *r;
  bool budget_hit = false;
  auto on_piece = [&](const Walk& st, int face, const Vec2& from, const Vec2& to, int along) {
    if (norm_sq(to + st.offset - st.origin) <= max_len_sq) return true;
    budget_hit = true;
    result.crossings = st.crossings;
    result.pieces = st.pieces;
    if (lambda) {
      Vec2 end = st.origin + *lambda * dir - st.offset;
      result.pieces.push_back(detail::canonical_piece(m, face, from, end, st.offset, along));
      result.point = locate(m, face, end);
      result.holonomy = *lambda * dir;
    } else {
      result.exact_end = false;
      result.point = locate(m, face, from);
      result.holonomy = from + st.offset - st.origin;
    }
    return false;
  };
  auto outcome = detail::walk(m, w, max_len_sq, on_piece, nullptr, 100'000'000);
  if (outcome.why == detail::WalkStop::BlockingVertex) {
    result.stopped_at_singularity = true;
    result.point = vertex_point(m, outcome.vertex_class);
    result.crossings = w.crossings;
    result.pieces = w.pieces;
    const Piece& last = w.pieces.back();
    result.holonomy = last.to + last.offset - w.origin;
  } else if (!budget_hit) {
    throw Error(ErrorCode::BudgetTooLargeGuard, "trace exceeded the step limit");
  }
  result.length_sq = norm_sq(result.holonomy);
  return result;
}

}  // namespace flatblock

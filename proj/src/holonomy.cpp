#include "flatblock/holonomy.h"

#include <algorithm>
#include <deque>
#include <set>

namespace flatblock {

namespace {

// Developed position of each face: local p sits at p + offset[f].
std::vector<Vec2> face_offsets_bfs(const Surface& m) {
  std::vector<std::optional<Vec2>> off(m.num_faces());
  off[0] = Vec2(0, 0);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop_front();
    for (int i = 0; i < m.num_sides(f); ++i) {
      EdgeRef q = m.partner({f, i});
      if (off[q.face]) continue;
      off[q.face] = *off[f] - m.gluing_translation({f, i});
      queue.push_back(q.face);
    }
  }
  std::vector<Vec2> out;
  for (auto& o : off) out.push_back(*o);
  return out;
}

int rational_rank(std::vector<std::vector<Rational>> rows) {
  int rank = 0;
  const size_t cols = rows.empty() ? 0 : rows.front().size();
  for (size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) == rank || rows[r][c] == 0) continue;
      Rational k = rows[r][c] / rows[rank][c];
      for (size_t j = c; j < cols; ++j) rows[r][j] -= k * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

BigInt round_half_up(const Scalar& s) { return (s + Scalar(Rational(1, 2))).floor(); }

std::pair<Vec2, Vec2> lagrange_reduce(Vec2 a, Vec2 b) {
  for (;;) {
    if (norm_sq(b) < norm_sq(a)) std::swap(a, b);
    BigInt mu = round_half_up(dot(a, b) / norm_sq(a));
    if (mu == 0) break;
    b -= Scalar(Rational(mu)) * a;
  }
  std::vector<Vec2> shortest{a, -a};
  if (norm_sq(b) == norm_sq(a)) {
    shortest.push_back(b);
    shortest.push_back(-b);
  }
  Vec2 u = *std::max_element(shortest.begin(), shortest.end());
  Vec2 w = (u == a || u == -a) ? b : a;
  if (cross(u, w).sign() < 0) w = -w;
  return {u, w};
}

// Basis of the Z-span of rational coordinate vectors (rank two assumed).
std::pair<std::pair<Rational, Rational>, std::pair<Rational, Rational>> rational_span_basis(
    const std::vector<std::pair<Rational, Rational>>& coords) {
  BigInt den = 1;
  for (const auto& [s, t] : coords) {
    den = lcm(den, s.get_den());
    den = lcm(den, t.get_den());
  }
  BigInt a = 0, b = 0, c = 0;
  for (const auto& [s, t] : coords) {
    Rational xs = s * den, ts = t * den;
    BigInt x = xs.get_num(), y = ts.get_num();
    if (x == 0) {
      c = gcd(c, y);
      continue;
    }
    if (a == 0) {
      a = x;
      b = y;
      continue;
    }
    BigInt g, p, q;
    mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), a.get_mpz_t(), x.get_mpz_t());
    BigInt nb = p * b + q * y;
    BigInt rest = (x / g) * b - (a / g) * y;
    a = g;
    b = nb;
    c = gcd(c, rest);
  }
  if (a < 0) {
    a = -a;
    b = -b;
  }
  if (c != 0) b = ((b % c) + c) % c;
  return {{Rational(a, den), Rational(b, den)}, {Rational(0), Rational(c, den)}};
}

bool inside_closed(const std::vector<Vec2>& poly, const Vec2& p) {
  for (size_t i = 0; i < poly.size(); ++i)
    if (cross(poly[(i + 1) % poly.size()] - poly[i], p - poly[i]).sign() < 0) return false;
  return true;
}

Scalar cover_covolume(const Vec2& u, const Vec2& w) { return abs(cross(u, w)); }

}  // namespace

std::string TorusPoint::str() const { return "[" + s.str() + "," + t.str() + "]"; }

TorusPoint torus_reduce(const Scalar& s, const Scalar& t) {
  return {s - Scalar(Rational(s.floor())), t - Scalar(Rational(t.floor()))};
}

TorusPoint parse_torus_point(std::string_view raw) {
  std::string text(raw);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw Error(ErrorCode::ParseError, "expected [s,t], got '" + text + "'");
  Vec2 v = parse_vec2("(" + text.substr(1, text.size() - 2) + ")");
  return torus_reduce(v.x, v.y);
}

HolonomyGroup absolute_holonomy(const Surface& m) {
  HolonomyGroup g;
  auto off = face_offsets_bfs(m);
  std::set<EdgeRef> seen;
  for (int f = 0; f < m.num_faces(); ++f)
    for (int i = 0; i < m.num_sides(f); ++i) {
      EdgeRef e{f, i};
      EdgeRef q = m.partner(e);
      if (seen.count(q)) continue;
      seen.insert(e);
      Vec2 delta = off[f] - m.gluing_translation(e) - off[q.face];
      if (delta.is_zero()) continue;
      if (std::find(g.generators.begin(), g.generators.end(), delta) == g.generators.end())
        g.generators.push_back(delta);
    }

  std::vector<std::vector<Rational>> rows;
  for (const auto& v : g.generators)
    rows.push_back({v.x.rational_part(), v.x.sqrt_part(), v.y.rational_part(), v.y.sqrt_part()});
  g.z_rank = rational_rank(rows);
  g.span_dim = g.generators.empty() ? 0 : 1;
  for (size_t i = 0; i < g.generators.size() && g.span_dim < 2; ++i)
    for (size_t j = i + 1; j < g.generators.size(); ++j)
      if (!cross(g.generators[i], g.generators[j]).is_zero()) {
        g.span_dim = 2;
        break;
      }

  if (g.discrete() && g.z_rank == 2) {
    const Vec2 u0 = g.generators.front();
    Vec2 w0;
    for (const auto& v : g.generators)
      if (!cross(u0, v).is_zero()) {
        w0 = v;
        break;
      }
    const Scalar det = cross(u0, w0);
    std::vector<std::pair<Rational, Rational>> coords;
    for (const auto& v : g.generators) {
      Scalar s = cross(v, w0) / det, t = cross(u0, v) / det;
      coords.push_back({s.rational_part(), t.rational_part()});
    }
    auto [b1, b2] = rational_span_basis(coords);
    Vec2 a = Scalar(b1.first) * u0 + Scalar(b1.second) * w0;
    Vec2 b = Scalar(b2.first) * u0 + Scalar(b2.second) * w0;
    g.lattice_basis = lagrange_reduce(a, b);
  }
  return g;
}

TorusCoverVerdict torus_cover(const Surface& m) {
  TorusCoverVerdict v;
  v.group = absolute_holonomy(m);
  const auto& gens = v.group.generators;
  if (!v.group.lattice_basis) {
    // Witness: two parallel generators with irrational ratio when there
    // are any, else a basis plus a generator outside its rational span.
    for (size_t i = 0; i < gens.size() && v.witness.empty(); ++i)
      for (size_t j = i + 1; j < gens.size(); ++j) {
        if (!cross(gens[i], gens[j]).is_zero()) continue;
        const Scalar& a = gens[i].x.is_zero() ? gens[i].y : gens[i].x;
        const Scalar& b = gens[i].x.is_zero() ? gens[j].y : gens[j].x;
        if (!(b / a).is_rational()) {
          v.witness = {gens[i], gens[j]};
          break;
        }
      }
    if (!v.witness.empty()) return v;
    if (v.group.span_dim == 2) {
      Vec2 u0 = gens.front(), w0;
      for (const auto& g : gens)
        if (!cross(u0, g).is_zero()) {
          w0 = g;
          break;
        }
      Scalar det = cross(u0, w0);
      v.witness = {u0, w0};
      for (const auto& g : gens)
        if (!(cross(g, w0) / det).is_rational() || !(cross(u0, g) / det).is_rational()) {
          v.witness.push_back(g);
          break;
        }
    } else {
      v.witness = gens;
    }
    return v;
  }
  v.is_cover = true;
  std::tie(v.u, v.w) = *v.group.lattice_basis;
  Scalar deg = m.area() / cover_covolume(v.u, v.w);
  v.degree = deg.rational_part();
  CoverMap c;
  c.u = v.u;
  c.w = v.w;
  c.face_offsets = face_offsets_bfs(m);
  for (int k = 0; k < static_cast<int>(m.vertex_classes().size()); ++k) {
    const auto& info = m.vertex_class_info(k);
    if (!info.blocking()) continue;
    v.branch_points.push_back({project(m, c, vertex_point(m, k)), k, info.multiplicity});
  }
  return v;
}

std::pair<Scalar, Scalar> CoverMap::coordinates(const Vec2& v) const {
  Scalar det = cross(u, w);
  return {cross(v, w) / det, cross(u, v) / det};
}

Vec2 CoverMap::plane(const TorusPoint& p) const { return p.s * u + p.t * w; }

CoverMap cover_map(const Surface& m) {
  CoverMap c;
  if (m.cover()) {
    c.u = m.cover()->u;
    c.w = m.cover()->w;
    c.face_offsets = m.cover()->face_offsets;
    c.from_construction = true;
  } else {
    HolonomyGroup g = absolute_holonomy(m);
    if (!g.lattice_basis) throw Error(ErrorCode::NoCoverData, "holonomy group is not a lattice");
    std::tie(c.u, c.w) = *g.lattice_basis;
    c.face_offsets = face_offsets_bfs(m);
  }
  c.degree = (m.area() / cover_covolume(c.u, c.w)).rational_part();
  return c;
}

TorusPoint project(const Surface& m, const CoverMap& c, const SurfacePoint& p) {
  LocalCopy l = local_copies(m, p).front();
  auto [s, t] = c.coordinates(l.pos + c.face_offsets[l.face]);
  return torus_reduce(s, t);
}

std::vector<SurfacePoint> fiber(const Surface& m, const CoverMap& c, const TorusPoint& p) {
  std::set<SurfacePoint> out;
  const Vec2 target = c.plane(p);
  for (int f = 0; f < m.num_faces(); ++f) {
    const Vec2 base = target - c.face_offsets[f];
    std::optional<BigInt> s_lo, s_hi, t_lo, t_hi;
    for (const auto& v : m.face(f)) {
      auto [s, t] = c.coordinates(v - base);
      BigInt sf = s.floor(), tf = t.floor();
      if (!s_lo || sf < *s_lo) s_lo = sf;
      if (!s_hi || sf + 1 > *s_hi) s_hi = sf + 1;
      if (!t_lo || tf < *t_lo) t_lo = tf;
      if (!t_hi || tf + 1 > *t_hi) t_hi = tf + 1;
    }
    for (BigInt a = *s_lo; a <= *s_hi; ++a)
      for (BigInt b = *t_lo; b <= *t_hi; ++b) {
        Vec2 z = base + Scalar(Rational(a)) * c.u + Scalar(Rational(b)) * c.w;
        if (inside_closed(m.face(f), z)) out.insert(locate(m, f, z));
      }
  }
  return {out.begin(), out.end()};
}

}  // namespace flatblock

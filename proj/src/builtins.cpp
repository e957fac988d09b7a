#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "flatblock/surface.h"

namespace flatblock {

namespace {

enum Side { kBottom = 0, kRight = 1, kTop = 2, kLeft = 3 };

std::vector<Vec2> square(const Scalar& x0, const Scalar& y0, const Scalar& side) {
  return {{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::BadParams, what);
}

bool is_permutation(const std::vector<int>& p) {
  std::vector<bool> hit(p.size(), false);
  for (int x : p) {
    if (x < 0 || x >= static_cast<int>(p.size()) || hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

std::vector<int> inverse(const std::vector<int>& p) {
  std::vector<int> inv(p.size());
  for (size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
  return inv;
}

CoverData unit_cover(int faces) {
  return {{1, 0}, {0, 1}, std::vector<Vec2>(faces, Vec2(0, 0))};
}

Surface origami_at(const std::vector<int>& h, const std::vector<int>& v, const std::vector<Vec2>& corners,
                   std::string name) {
  const int m = static_cast<int>(h.size());
  require(m > 0 && static_cast<int>(v.size()) == m, "origami permutations must have equal positive size");
  require(is_permutation(h) && is_permutation(v), "origami data must be permutations");
  std::vector<bool> seen(m, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j : {h[i], v[i]})
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        stack.push_back(j);
      }
  }
  if (reached != m) throw Error(ErrorCode::NotTransitive, "<h, v> does not act transitively");
  RawSurface raw;
  raw.name = std::move(name);
  for (int i = 0; i < m; ++i) raw.faces.push_back(square(corners[i].x, corners[i].y, 1));
  for (int i = 0; i < m; ++i) {
    raw.gluings.push_back({{i, kRight}, {h[i], kLeft}});
    raw.gluings.push_back({{i, kTop}, {v[i], kBottom}});
  }
  return Surface::build(raw);
}

std::vector<int> parse_one_line(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    require(!item.empty() && std::all_of(item.begin(), item.end(), ::isdigit), "bad permutation entry '" + item + "'");
    out.push_back(std::stoi(item) - 1);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int parse_int(const std::string& s) {
  require(!s.empty() && std::all_of(s.begin(), s.end(), ::isdigit), "expected a non-negative integer, got '" + s + "'");
  return std::stoi(s);
}

}  // namespace

Surface make_torus() {
  RawSurface raw;
  raw.name = "torus";
  raw.faces.push_back(square(0, 0, 1));
  raw.gluings = {{{0, kRight}, {0, kLeft}}, {{0, kTop}, {0, kBottom}}};
  return Surface::build(raw).with_cover(unit_cover(1));
}

Surface make_torus_grid(int n) {
  require(n >= 1, "torus_grid needs n >= 1");
  RawSurface raw;
  raw.name = "torus_grid:" + std::to_string(n);
  Scalar side = Scalar::ratio(1, n);
  auto id = [n](int i, int j) { return ((j + n) % n) * n + (i + n) % n; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) raw.faces.push_back(square(side * i, side * j, side));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      raw.gluings.push_back({{id(i, j), kRight}, {id(i + 1, j), kLeft}});
      raw.gluings.push_back({{id(i, j), kTop}, {id(i, j + 1), kBottom}});
    }
  return Surface::build(raw).with_cover(unit_cover(n * n));
}

Surface make_staircase() {
  // Three rows of two unit cells, each row shifted one cell right of the
  // one below. Rows close up horizontally; the outer columns stack into a
  // two-cell vertical cylinder.
  std::vector<int> h{1, 0, 3, 2, 5, 4};
  std::vector<int> v{5, 2, 1, 4, 3, 0};
  std::vector<Vec2> corners{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 2}};
  return origami_at(h, v, corners, "staircase");
}

Surface make_l_shaped(const Scalar& a, const Scalar& b) {
  require(a.sign() > 0 && b.sign() > 0, "l_shaped needs positive a and b");
  long d = merge_fields(a, b);
  RawSurface raw;
  raw.field_d = d;
  raw.name = "l_shaped:" + a.str() + "," + b.str();
  Scalar one(1);
  raw.faces.push_back(square(0, 0, 1));
  raw.faces.push_back({{1, 0}, {one + a, 0}, {one + a, 1}, {1, 1}});
  raw.faces.push_back({{0, 1}, {1, 1}, {1, one + b}, {0, one + b}});
  raw.gluings = {
      {{0, kRight}, {1, kLeft}}, {{0, kTop}, {2, kBottom}}, {{0, kLeft}, {1, kRight}},
      {{0, kBottom}, {2, kTop}}, {{1, kBottom}, {1, kTop}}, {{2, kLeft}, {2, kRight}},
  };
  return Surface::build(raw);
}

Surface make_golden_l() {
  Scalar a(Rational(-1, 2), Rational(1, 2), 5);
  return make_l_shaped(a, a).with_name("golden_l");
}

Surface make_octagon() {
  Scalar r(Rational(0), Rational(1, 2), 2);
  Scalar one(1), two_r = r + r;
  RawSurface raw;
  raw.field_d = 2;
  raw.name = "octagon";
  raw.faces.push_back({{0, 0}, {1, 0}, {one + r, r}, {one + r, one + r}, {1, one + two_r}, {0, one + two_r},
                       {-r, one + r}, {-r, r}});
  for (int i = 0; i < 4; ++i) raw.gluings.push_back({{0, i}, {0, i + 4}});
  return Surface::build(raw);
}

Surface make_origami(const std::vector<int>& h, const std::vector<int>& v) {
  std::vector<Vec2> corners;
  for (size_t i = 0; i < h.size(); ++i) corners.emplace_back(static_cast<long>(i), 0);
  std::string name = "origami:";
  for (size_t i = 0; i < h.size(); ++i) name += (i ? "," : "") + std::to_string(h[i] + 1);
  name += "/";
  for (size_t i = 0; i < v.size(); ++i) name += (i ? "," : "") + std::to_string(v[i] + 1);
  Surface s = origami_at(h, v, corners, name);
  return s.with_cover(unit_cover(s.num_faces()));
}

std::vector<int> commutator_cycle_type(const std::vector<int>& h, const std::vector<int>& v) {
  auto hi = inverse(h);
  auto vi = inverse(v);
  const int m = static_cast<int>(h.size());
  std::vector<int> c(m);
  for (int i = 0; i < m; ++i) c[i] = h[v[hi[vi[i]]]];
  std::vector<bool> seen(m, false);
  std::vector<int> type;
  for (int i = 0; i < m; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = c[j]) {
      seen[j] = true;
      ++len;
    }
    type.push_back(len);
  }
  std::sort(type.rbegin(), type.rend());
  return type;
}

int grid_vertex_monodromy(int n, int k, const EdgeShifts& shifts, int i, int j) {
  auto right = [&](int a, int b) { return shifts[((b + n) % n) * n + (a + n) % n]; };
  auto top = [&](int a, int b) { return shifts[n * n + ((b + n) % n) * n + (a + n) % n]; };
  // Counterclockwise loop around (i/n, j/n), starting in the cell below-right.
  long m = static_cast<long>(top(i, j - 1)) - right(i - 1, j) - top(i - 1, j - 1) + right(i - 1, j - 1);
  return static_cast<int>(((m % k) + k) % k);
}

Surface make_branched_cover_grid(int n, int k, const EdgeShifts& shifts) {
  require(n >= 1 && k >= 2, "branched_cover_grid needs n >= 1 and k >= 2");
  require(static_cast<int>(shifts.size()) == 2 * n * n, "expected " + std::to_string(2 * n * n) + " edge shifts");
  RawSurface raw;
  raw.name = "cover_grid:" + std::to_string(n) + "," + std::to_string(k);
  for (int s : shifts) raw.name += "," + std::to_string(((s % k) + k) % k);
  Scalar side = Scalar::ratio(1, n);
  auto id = [n, k](int i, int j, int s) {
    return (((s % k) + k) % k) * n * n + ((j + n) % n) * n + (i + n) % n;
  };
  for (int s = 0; s < k; ++s)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) raw.faces.push_back(square(side * i, side * j, side));
  for (int s = 0; s < k; ++s)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        int sv = shifts[j * n + i];
        int sh = shifts[n * n + j * n + i];
        raw.gluings.push_back({{id(i, j, s), kRight}, {id(i + 1, j, s + sv), kLeft}});
        raw.gluings.push_back({{id(i, j, s), kTop}, {id(i, j + 1, s + sh), kBottom}});
      }
  try {
    Surface m = Surface::build(raw);
    return m.with_cover(unit_cover(m.num_faces()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Disconnected) throw Error(ErrorCode::DisconnectedCover, "sheets do not connect");
    throw;
  }
}

namespace {

bool fully_ramified(int n, int k, const EdgeShifts& shifts) {
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (std::gcd(grid_vertex_monodromy(n, k, shifts, i, j), k) != 1) return false;
  return true;
}

bool connected_sheets(int n, int k, const EdgeShifts& shifts) {
  // The sheet group is generated by the shifts together with loop monodromies;
  // the cover is connected iff the shifts generate Z/k.
  int g = k;
  for (int s : shifts) g = std::gcd(g, s);
  return g == 1;
}

}  // namespace

EdgeShifts find_full_ramification_shifts(int n, int k) {
  require(n >= 1 && k >= 2, "need n >= 1 and k >= 2");
  const int len = 2 * n * n;
  double space = std::pow(static_cast<double>(k), len);
  if (space <= (1 << 20)) {
    EdgeShifts s(len, 0);
    while (true) {
      if (fully_ramified(n, k, s) && connected_sheets(n, k, s)) return s;
      int pos = 0;
      while (pos < len && ++s[pos] == k) s[pos++] = 0;
      if (pos == len) break;
    }
  } else {
    // Tops of column i shifted by i: monodromy 1 at i > 0 and 1 - n at i = 0.
    EdgeShifts s(len, 0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) s[n * n + j * n + i] = i % k;
    if (fully_ramified(n, k, s) && connected_sheets(n, k, s)) return s;
  }
  throw Error(ErrorCode::BadParams, "no fully ramified shifts found for n=" + std::to_string(n) + ", k=" + std::to_string(k));
}

std::vector<std::string> builtin_names() {
  return {"torus", "torus_grid:n", "staircase", "l_shaped:a,b", "golden_l", "octagon", "origami:h/v", "cover_grid:n,k[,shifts...]"};
}

Surface builtin(std::string_view spec) {
  std::string s(spec);
  auto colon = s.find(':');
  std::string name = s.substr(0, colon);
  std::string params = colon == std::string::npos ? "" : s.substr(colon + 1);
  auto no_params = [&] { require(params.empty(), name + " takes no parameters"); };
  if (name == "torus") return no_params(), make_torus();
  if (name == "staircase") return no_params(), make_staircase();
  if (name == "golden_l") return no_params(), make_golden_l();
  if (name == "octagon") return no_params(), make_octagon();
  if (name == "torus_grid") return make_torus_grid(parse_int(params));
  if (name == "l_shaped") {
    if (params.empty()) return make_l_shaped(1, 1);
    auto parts = split(params, ',');
    require(parts.size() == 2, "l_shaped takes a,b");
    return make_l_shaped(Scalar::parse(parts[0]), Scalar::parse(parts[1]));
  }
  if (name == "origami") {
    auto parts = split(params, '/');
    require(parts.size() == 2, "origami takes h/v in one-line notation");
    return make_origami(parse_one_line(parts[0]), parse_one_line(parts[1]));
  }
  if (name == "cover_grid") {
    auto parts = split(params, ',');
    require(parts.size() >= 2, "cover_grid takes n,k[,shifts]");
    int n = parse_int(parts[0]);
    int k = parse_int(parts[1]);
    EdgeShifts shifts;
    if (parts.size() == 2) {
      shifts = find_full_ramification_shifts(n, k);
    } else {
      for (size_t i = 2; i < parts.size(); ++i) shifts.push_back(parse_int(parts[i]));
    }
    return make_branched_cover_grid(n, k, shifts);
  }
  throw Error(ErrorCode::UnknownBuiltin, "'" + name + "'");
}

// ---------------------------------------------------------------- rectilinear

RectilinearSplit split_rectilinear(const std::vector<Vec2>& polygon) {
  const int n = static_cast<int>(polygon.size());
  if (n < 4) throw Error(ErrorCode::BadPolygon, "rectilinear polygon needs at least 4 vertices");
  std::vector<Scalar> xs, ys;
  for (int i = 0; i < n; ++i) {
    Vec2 side = polygon[(i + 1) % n] - polygon[i];
    if (side.is_zero() || (!side.x.is_zero() && !side.y.is_zero()))
      throw Error(ErrorCode::BadPolygon, "side " + std::to_string(i) + " is not axis-aligned");
    xs.push_back(polygon[i].x);
    ys.push_back(polygon[i].y);
  }
  auto uniq = [](std::vector<Scalar>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(xs);
  uniq(ys);
  auto inside = [&](const Vec2& c) {
    int crossings = 0;
    for (int i = 0; i < n; ++i) {
      const Vec2& p = polygon[i];
      const Vec2& q = polygon[(i + 1) % n];
      if (p.x != q.x || p.x < c.x) continue;
      const Scalar& lo = std::min(p.y, q.y);
      const Scalar& hi = std::max(p.y, q.y);
      if (lo < c.y && c.y < hi) ++crossings;
    }
    return crossings % 2 == 1;
  };
  RectilinearSplit out;
  std::map<std::pair<int, int>, int> cell;
  for (size_t b = 0; b + 1 < ys.size(); ++b)
    for (size_t a = 0; a + 1 < xs.size(); ++a) {
      Vec2 c((xs[a] + xs[a + 1]) / 2, (ys[b] + ys[b + 1]) / 2);
      if (!inside(c)) continue;
      cell[{static_cast<int>(a), static_cast<int>(b)}] = static_cast<int>(out.faces.size());
      out.faces.push_back({{xs[a], ys[b]}, {xs[a + 1], ys[b]}, {xs[a + 1], ys[b + 1]}, {xs[a], ys[b + 1]}});
    }
  for (const auto& [key, f] : cell) {
    auto [a, b] = key;
    if (auto it = cell.find({a + 1, b}); it != cell.end()) out.gluings.push_back({{f, kRight}, {it->second, kLeft}});
    if (auto it = cell.find({a, b + 1}); it != cell.end()) out.gluings.push_back({{f, kTop}, {it->second, kBottom}});
  }
  auto index_of = [](const std::vector<Scalar>& v, const Scalar& s) {
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), s) - v.begin());
  };
  for (int i = 0; i < n; ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % n];
    std::vector<EdgeRef> run;
    if (p.y == q.y) {
      int b = index_of(ys, p.y);
      int a0 = index_of(xs, p.x), a1 = index_of(xs, q.x);
      if (a0 < a1) {
        for (int a = a0; a < a1; ++a) run.push_back({cell.at({a, b}), kBottom});
      } else {
        for (int a = a0 - 1; a >= a1; --a) run.push_back({cell.at({a, b - 1}), kTop});
      }
    } else {
      int a = index_of(xs, p.x);
      int b0 = index_of(ys, p.y), b1 = index_of(ys, q.y);
      if (b0 < b1) {
        for (int b = b0; b < b1; ++b) run.push_back({cell.at({a - 1, b}), kRight});
      } else {
        for (int b = b0 - 1; b >= b1; --b) run.push_back({cell.at({a, b}), kLeft});
      }
    }
    out.boundary.push_back(std::move(run));
  }
  return out;
}

}  // namespace flatblock

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>

#include "flatblock/autos.h"
#include "flatblock/blocking.h"
#include "segment_geom.h"

namespace flatblock {

namespace {

// Above this many segments only greedy bounds are reported.
constexpr size_t kExactLimit = 2000;

struct Bits {
  std::vector<uint64_t> w;

  explicit Bits(size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(size_t i) { w[i / 64] |= uint64_t{1} << (i % 64); }
  void reset(size_t i) { w[i / 64] &= ~(uint64_t{1} << (i % 64)); }
  bool test(size_t i) const { return (w[i / 64] >> (i % 64)) & 1; }
  bool none() const {
    return std::all_of(w.begin(), w.end(), [](uint64_t x) { return x == 0; });
  }
  int count() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (size_t i = 0; i < w.size(); ++i) r.w[i] &= o.w[i];
    return r;
  }
  Bits minus(const Bits& o) const {
    Bits r = *this;
    for (size_t i = 0; i < w.size(); ++i) r.w[i] &= ~o.w[i];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (size_t i = 0; i < w.size(); ++i)
      if (w[i] & ~o.w[i]) return false;
    return true;
  }
  template <class F>
  void each(F f) const {
    for (size_t i = 0; i < w.size(); ++i)
      for (uint64_t x = w[i]; x; x &= x - 1) f(i * 64 + std::countr_zero(x));
  }
  friend bool operator==(const Bits&, const Bits&) = default;
};

// Maximum clique with greedy colouring bounds.
class CliqueSearch {
 public:
  CliqueSearch(const std::vector<Bits>& adj, long limit) : adj_(adj), limit_(limit) {}

  std::vector<int> run(const std::vector<int>& warm) {
    best_ = warm;
    Bits all(adj_.size());
    for (size_t i = 0; i < adj_.size(); ++i) all.set(i);
    std::vector<int> r;
    expand(all, r);
    return best_;
  }
  bool complete() const { return nodes_ <= limit_; }

 private:
  void expand(Bits p, std::vector<int>& r) {
    if (++nodes_ > limit_) return;
    std::vector<int> order, color;
    Bits uncolored = p;
    int k = 0;
    while (!uncolored.none()) {
      ++k;
      Bits q = uncolored;
      while (!q.none()) {
        int v = -1;
        q.each([&](size_t i) {
          if (v < 0) v = static_cast<int>(i);
        });
        uncolored.reset(v);
        q.reset(v);
        q = q.minus(adj_[v]);
        order.push_back(v);
        color.push_back(k);
      }
    }
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      if (r.size() + color[i] <= best_.size() || nodes_ > limit_) return;
      int v = order[i];
      r.push_back(v);
      Bits np = p & adj_[v];
      if (np.none()) {
        if (r.size() > best_.size()) best_ = r;
      } else {
        expand(np, r);
      }
      r.pop_back();
      p.reset(v);
    }
  }

  const std::vector<Bits>& adj_;
  long limit_;
  long nodes_ = 0;
  std::vector<int> best_;
};

std::vector<std::vector<detail::PieceBox>> all_boxes(const std::vector<Segment>& segs) {
  std::vector<std::vector<detail::PieceBox>> out;
  for (const auto& s : segs) out.push_back(detail::piece_boxes(s));
  return out;
}

// Exact set cover over segment indices.
class CoverSearch {
 public:
  CoverSearch(std::vector<Bits> sets, size_t n, long limit) : sets_(std::move(sets)), n_(n), limit_(limit) {
    covering_.resize(n);
    for (size_t s = 0; s < sets_.size(); ++s) sets_[s].each([&](size_t e) { covering_[e].push_back(static_cast<int>(s)); });
  }

  std::vector<int> run(int lower) {
    greedy();
    lower_ = lower;
    Bits todo(n_);
    for (size_t i = 0; i < n_; ++i) todo.set(i);
    std::vector<int> chosen;
    if (static_cast<int>(best_.size()) > lower_) search(todo, chosen);
    return best_;
  }
  bool complete() const { return nodes_ <= limit_; }

 private:
  void greedy() {
    Bits todo(n_);
    for (size_t i = 0; i < n_; ++i) todo.set(i);
    while (!todo.none()) {
      int pick = -1, gain = 0;
      for (size_t s = 0; s < sets_.size(); ++s) {
        int g = (sets_[s] & todo).count();
        if (g > gain) {
          gain = g;
          pick = static_cast<int>(s);
        }
      }
      best_.push_back(pick);
      todo = todo.minus(sets_[pick]);
    }
  }

  // Elements no two of which share a set each need their own point.
  int packing_bound(const Bits& todo) const {
    Bits free = todo;
    int k = 0;
    while (!free.none()) {
      int e = -1;
      size_t fewest = SIZE_MAX;
      free.each([&](size_t i) {
        if (covering_[i].size() < fewest) {
          fewest = covering_[i].size();
          e = static_cast<int>(i);
        }
      });
      ++k;
      free.reset(e);
      for (int s : covering_[e]) free = free.minus(sets_[s]);
    }
    return k;
  }

  void search(const Bits& todo, std::vector<int>& chosen) {
    if (++nodes_ > limit_) return;
    if (todo.none()) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    if (static_cast<int>(chosen.size()) + packing_bound(todo) >= static_cast<int>(best_.size())) return;
    int e = -1;
    size_t fewest = SIZE_MAX;
    todo.each([&](size_t i) {
      if (covering_[i].size() < fewest) {
        fewest = covering_[i].size();
        e = static_cast<int>(i);
      }
    });
    std::vector<int> options = covering_[e];
    std::sort(options.begin(), options.end(),
              [&](int a, int b) { return (sets_[a] & todo).count() > (sets_[b] & todo).count(); });
    for (int s : options) {
      chosen.push_back(s);
      search(todo.minus(sets_[s]), chosen);
      chosen.pop_back();
      if (static_cast<int>(best_.size()) <= lower_ || nodes_ > limit_) return;
    }
  }

  std::vector<Bits> sets_;
  size_t n_;
  long limit_;
  long nodes_ = 0;
  int lower_ = 0;
  std::vector<std::vector<int>> covering_;
  std::vector<int> best_;
};

// Direction of a line normalised so its first nonzero coordinate is 1,
// and the offset cross(dir, p) identifying the line.
std::pair<Vec2, Scalar> line_key(const Vec2& p, const Vec2& q) {
  Vec2 d = q - p;
  d = d.x.is_zero() ? d / d.y : d / d.x;
  return {d, cross(d, p)};
}

// Largest clique of the disjointness graph.
DisjointFamily family_from(const std::vector<Bits>& compatible, long node_limit) {
  const size_t n = compatible.size();
  DisjointFamily out;
  std::vector<int> warm;
  {
    std::vector<int> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return compatible[a].count() > compatible[b].count(); });
    for (int v : order)
      if (std::all_of(warm.begin(), warm.end(), [&](int u) { return compatible[u].test(v); })) warm.push_back(v);
  }
  CliqueSearch search(compatible, node_limit);
  out.members = search.run(warm);
  std::sort(out.members.begin(), out.members.end());
  out.optimal = search.complete();
  return out;
}

}  // namespace

DisjointFamily max_disjoint_family(const Surface& m, const std::vector<Segment>& segments, long node_limit) {
  const size_t n = segments.size();
  if (n == 0) return {};
  if (n > kExactLimit) node_limit = 0;
  (void)m;
  auto boxes = all_boxes(segments);
  std::vector<Bits> compatible(n, Bits(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      bool hit = false;
      detail::for_each_contact(segments[i], boxes[i], segments[j], boxes[j], [&](const detail::Contact&) {
        hit = true;
        return false;
      });
      if (!hit) {
        compatible[i].set(j);
        compatible[j].set(i);
      }
    }
  return family_from(compatible, node_limit);
}

StabbingSet detail::min_stab_with_family(const Surface& m, const SurfacePoint& x, const SurfacePoint& y,
                                         const std::vector<Segment>& segments, long node_limit,
                                         DisjointFamily& family) {
  const size_t n = segments.size();
  StabbingSet out;
  family = {};
  if (n == 0) return out;
  if (n > kExactLimit) node_limit = 0;
  auto boxes = all_boxes(segments);
  // Candidates suffice: a point z meeting a set S of segments can be traded
  // for a candidate meeting a superset of S. If |S| = 1 take a point inside
  // that segment. If two members of S cross transversally at z, or share a
  // regular vertex there, z is itself a pairwise contact and every member
  // of S is recorded against it. Otherwise S runs along one line through z;
  // the cells between consecutive overlap endpoints on that line carry
  // constant coverage, and the cell next to z is covered by all of S.
  std::map<SurfacePoint, Bits> cover;
  auto add = [&](const SurfacePoint& p, size_t i) {
    if (p == x || p == y) return;
    auto it = cover.try_emplace(p, Bits(n)).first;
    it->second.set(i);
  };

  struct Span {
    int face;
    Vec2 p, q;
  };
  std::map<std::pair<int, std::pair<Vec2, Scalar>>, std::vector<Span>> lines;
  std::map<std::pair<int, Vec2>, SurfacePoint> located;
  std::vector<Bits> compatible(n, Bits(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      bool hit = false;
      detail::for_each_contact(segments[i], boxes[i], segments[j], boxes[j], [&](const detail::Contact& c) {
        hit = true;
        if (c.face < 0) {
          add(vertex_point(m, c.vertex), i);
          add(vertex_point(m, c.vertex), j);
        } else if (!c.overlap) {
          auto it = located.find({c.face, c.p});
          if (it == located.end()) it = located.emplace(std::pair{c.face, c.p}, locate(m, c.face, c.p)).first;
          const SurfacePoint& p = it->second;
          add(p, i);
          add(p, j);
        } else {
          lines[{c.face, line_key(c.p, c.q)}].push_back({c.face, c.p, c.q});
        }
        return true;
      });
      if (!hit) {
        compatible[i].set(j);
        compatible[j].set(i);
      }
    }

  for (const auto& [key, spans] : lines) {
    const Vec2& d = key.second.first;
    std::set<Scalar> params;
    for (const auto& s : spans) {
      params.insert(dot(s.p, d));
      params.insert(dot(s.q, d));
    }
    std::vector<Scalar> ps(params.begin(), params.end());
    for (size_t k = 0; k + 1 < ps.size(); ++k) {
      Scalar mid = (ps[k] + ps[k + 1]) / 2;
      for (const auto& s : spans) {
        Scalar a = dot(s.p, d), b = dot(s.q, d);
        if (std::min(a, b) < mid && mid < std::max(a, b)) {
          Vec2 pt = s.p + ((mid - a) / (b - a)) * (s.q - s.p);
          SurfacePoint p = locate(m, key.first, pt);
          if (p == x || p == y) break;
          for (size_t i = 0; i < n; ++i)
            if (in_segment_interior(m, segments[i], p)) add(p, i);
          break;
        }
      }
    }
  }

  static const Rational fractions[] = {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {2, 5}, {3, 5}};
  for (size_t i = 0; i < n; ++i)
    for (const auto& r : fractions) {
      SurfacePoint p = segment_point_at(m, segments[i], r);
      if (p == x || p == y) continue;
      add(p, i);
      break;
    }

  // Drop duplicate and dominated candidates.
  std::vector<std::pair<SurfacePoint, Bits>> cands(cover.begin(), cover.end());
  std::stable_sort(cands.begin(), cands.end(),
                   [](const auto& a, const auto& b) { return a.second.count() > b.second.count(); });
  std::vector<SurfacePoint> keep_pts;
  std::vector<Bits> keep_sets;
  for (const auto& [p, b] : cands) {
    bool dominated = false;
    for (const auto& k : keep_sets)
      if (b.subset_of(k)) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    keep_pts.push_back(p);
    keep_sets.push_back(b);
  }

  family = family_from(compatible, node_limit);
  int lower = static_cast<int>(family.members.size());
  CoverSearch search(keep_sets, n, node_limit);
  auto chosen = search.run(lower);
  for (int s : chosen) out.points.push_back(keep_pts[s]);
  std::sort(out.points.begin(), out.points.end());
  out.optimal = search.complete() || static_cast<int>(chosen.size()) == lower;
  return out;
}

StabbingSet min_stab(const Surface& m, const SurfacePoint& x, const SurfacePoint& y,
                     const std::vector<Segment>& segments, long node_limit) {
  DisjointFamily family;
  return detail::min_stab_with_family(m, x, y, segments, node_limit, family);
}

}  // namespace flatblock

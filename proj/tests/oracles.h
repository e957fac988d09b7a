#pragma once

// Independent reference computations and hand-rolled generators for the
// test suites. Nothing here calls the tracer or the surface builder.

#include <gmpxx.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "flatblock/exactnum.h"

namespace oracle {

using Q = mpq_class;
using QVec = std::pair<Q, Q>;

/// High-precision decimal evaluation of a + b sqrt(d).
inline mpf_class high_precision(const flatblock::Scalar& s) {
  mpf_class a(s.rational_part(), 1024), b(s.sqrt_part(), 1024), r(s.field(), 1024);
  r = sqrt(r);
  return a + b * r;
}

inline int hp_sign(const flatblock::Scalar& s) { return sgn(high_precision(s)); }

// ---------------------------------------------------------------- generators

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); }

  /// Rational in [0, 1) with denominator up to max_den.
  Q unit_fraction(long max_den = 12) {
    long den = uniform(2, max_den);
    Q q(uniform(0, den - 1), den);
    q.canonicalize();
    return q;
  }
  /// Rational in [0, 1) avoiding 0, with odd-ish denominators so points
  /// stay generic.
  Q interior_fraction(long max_den = 13) {
    for (;;) {
      Q q = unit_fraction(max_den);
      if (q != 0) return q;
    }
  }
  Q signed_rational(long span = 5, long max_den = 7) {
    long den = uniform(1, max_den);
    Q q(uniform(-span * den, span * den), den);
    q.canonicalize();
    return q;
  }

  std::vector<int> permutation(int m) {
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), gen);
    return p;
  }
};

inline bool transitive(const std::vector<int>& h, const std::vector<int>& v) {
  const int m = static_cast<int>(h.size());
  std::vector<bool> seen(m, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int t : {h[s], v[s]})
      if (!seen[t]) {
        seen[t] = true;
        ++count;
        stack.push_back(t);
      }
  }
  return count == m;
}

inline std::pair<std::vector<int>, std::vector<int>> random_origami(Rng& rng, int m) {
  for (;;) {
    auto h = rng.permutation(m), v = rng.permutation(m);
    if (transitive(h, v)) return {h, v};
  }
}

inline std::vector<int> inverse(const std::vector<int>& p) {
  std::vector<int> q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
  return q;
}

/// Genus from the commutator cycle type: 2g - 2 = sum of (length - 1).
inline int origami_genus(const std::vector<int>& h, const std::vector<int>& v) {
  const int m = static_cast<int>(h.size());
  auto hi = inverse(h), vi = inverse(v);
  std::vector<bool> seen(m, false);
  int excess = 0;
  for (int s = 0; s < m; ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (int t = s; !seen[t]; t = vi[hi[v[h[t]]]]) {
      seen[t] = true;
      ++len;
    }
    excess += len - 1;
  }
  return excess / 2 + 1;
}

// ---------------------------------------------------------------- torus

/// Holonomies of all segments between x and y on the unit square torus:
/// the translates y - x + (i, j) of squared length in (0, budget].
inline std::vector<QVec> torus_translates(const QVec& x, const QVec& y, const Q& budget) {
  std::vector<QVec> out;
  Q dx = y.first - x.first, dy = y.second - x.second;
  long r = 1;
  while (Q(r * r) <= budget) ++r;
  for (long i = -r - 1; i <= r + 1; ++i)
    for (long j = -r - 1; j <= r + 1; ++j) {
      Q hx = dx + i, hy = dy + j;
      Q len = hx * hx + hy * hy;
      if (len > 0 && len <= budget) out.push_back({hx, hy});
    }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- origami

/// Straight walk on a square-tiled surface given by permutations, square by
/// square. Returns the holonomies of all segments from (sx, px) to
/// (sy, py), both interior points, within the budget.
inline std::vector<QVec> origami_segments(const std::vector<int>& h, const std::vector<int>& v, int sx,
                                          const QVec& px, int sy, const QVec& py, const Q& budget) {
  auto hi = inverse(h), vi = inverse(v);
  auto regular_tr = [&](int q) { return h[v[q]] == v[h[q]]; };
  std::vector<QVec> out;
  long r = 1;
  while (Q(r * r) <= budget) ++r;
  Q dx = py.first - px.first, dy = py.second - px.second;
  for (long i = -r - 1; i <= r + 1; ++i)
    for (long j = -r - 1; j <= r + 1; ++j) {
      Q hx = dx + i, hy = dy + j;
      Q len = hx * hx + hy * hy;
      if (len == 0 || len > budget) continue;
      int s = sx;
      Q x = px.first, y = px.second, t = 0;
      bool blocked = false;
      for (;;) {
        // Parameter to the next vertical and horizontal grid line.
        Q tx = hx > 0 ? (1 - x) / hx : hx < 0 ? -x / hx : Q(2);
        Q ty = hy > 0 ? (1 - y) / hy : hy < 0 ? -y / hy : Q(2);
        Q step = std::min(tx, ty);
        if (t + step >= 1) break;
        t += step;
        x += step * hx;
        y += step * hy;
        if (tx == ty) {
          int q;
          if (hx > 0 && hy > 0) q = s;
          else if (hx < 0 && hy > 0) q = hi[s];
          else if (hx > 0) q = vi[s];
          else q = hi[vi[s]];
          if (!regular_tr(q)) {
            blocked = true;
            break;
          }
          s = hx > 0 ? h[s] : hi[s];
          s = hy > 0 ? v[s] : vi[s];
          x = hx > 0 ? Q(0) : Q(1);
          y = hy > 0 ? Q(0) : Q(1);
        } else if (tx < ty) {
          s = hx > 0 ? h[s] : hi[s];
          x = hx > 0 ? Q(0) : Q(1);
        } else {
          s = hy > 0 ? v[s] : vi[s];
          y = hy > 0 ? Q(0) : Q(1);
        }
      }
      if (blocked) continue;
      Q rest = 1 - t;
      x += rest * hx;
      y += rest * hy;
      if (s == sy && x == py.first && y == py.second) out.push_back({hx, hy});
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle

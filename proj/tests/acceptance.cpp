// Acceptance checks, one per criterion. Usage: acceptance <n> [<n> ...];
// with no arguments every criterion runs. Prints one PASS/FAIL line each.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include "oracles.h"

#include "flatblock/autos.h"
#include "flatblock/blocking.h"
#include "flatblock/cli.h"

using namespace flatblock;
using oracle::Q;
using oracle::QVec;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

SurfacePoint at(const Surface& m, int f, const Q& x, const Q& y) {
  return locate(m, f, m.vertex(f, 0) + Vec2(Scalar(x), Scalar(y)));
}

bool same_points(const std::vector<SurfacePoint>& a, const std::vector<SurfacePoint>& b) {
  return a.size() == b.size() && std::is_permutation(a.begin(), a.end(), b.begin());
}

TorusPoint random_torus_point(oracle::Rng& rng) {
  return torus_reduce(Scalar(rng.interior_fraction(17)), Scalar(rng.interior_fraction(19)));
}

SurfacePoint on_unit_torus(const Surface& m, const TorusPoint& p) { return locate(m, 0, {p.s, p.t}); }

// Torus: generic pairs and diagonal pairs at budget 16.
Outcome criterion_1() {
  Outcome o;
  Surface m = make_torus();
  oracle::Rng rng(101);
  int generic = 0, diagonal = 0;
  while (generic < 25) {
    TorusPoint x = random_torus_point(rng), y = random_torus_point(rng);
    if (x == y) continue;
    auto r = bc_report(m, on_unit_torus(m, x), on_unit_torus(m, y), Scalar(16));
    std::vector<SurfacePoint> formula;
    for (const auto& p : torus_blocking_set(x, y, 2, 1)) formula.push_back(on_unit_torus(m, p));
    if (r.lower != 4 || !r.upper || *r.upper != 4 || r.upper_source.rfind("torus", 0) != 0)
      o.fail("generic pair " + x.str() + " " + y.str() + " lower " + std::to_string(r.lower));
    if (!same_points(r.upper_set, formula) || !same_points(r.stab.points, formula))
      o.fail("generic pair " + x.str() + " " + y.str() + ": witness is not the formula set");
    ++generic;
  }
  while (diagonal < 10) {
    TorusPoint x = random_torus_point(rng);
    auto sx = on_unit_torus(m, x);
    auto r = bc_report(m, sx, sx, Scalar(16));
    std::vector<SurfacePoint> formula;
    for (const auto& p : torus_blocking_set_diagonal(x, 2)) formula.push_back(on_unit_torus(m, p));
    if (r.lower != 3 || !r.upper || *r.upper != 3 || r.upper_source.rfind("torus", 0) != 0)
      o.fail("diagonal point " + x.str() + " lower " + std::to_string(r.lower));
    if (!same_points(r.upper_set, formula) || !same_points(r.stab.points, formula))
      o.fail("diagonal point " + x.str() + ": witness is not the formula set");
    ++diagonal;
  }
  o.detail = o.pass ? "25 generic pairs at [4,4], 10 diagonal at [3,3], formula sets as witnesses, budget 16" : o.detail;
  return o;
}

// Torus formula sets of every order n = 2..5 block at budget 25.
Outcome criterion_2() {
  Outcome o;
  Surface m = make_torus();
  oracle::Rng rng(202);
  int checked = 0;
  for (int n = 2; n <= 5; ++n) {
    std::vector<int> as;
    for (int a = 1; a < n; ++a)
      if (std::gcd(a, n) == 1) as.push_back(a);
    for (int k = 0; k < 10; ++k) {
      TorusPoint x = random_torus_point(rng);
      bool diag = k >= 8;
      TorusPoint y = diag ? x : random_torus_point(rng);
      if (!diag && x == y) continue;
      int a = as[k % as.size()];
      auto base = diag ? torus_blocking_set_diagonal(x, n) : torus_blocking_set(x, y, n, a);
      size_t want = diag ? n * n - 1 : n * n;
      std::vector<SurfacePoint> set;
      for (const auto& p : base) set.push_back(on_unit_torus(m, p));
      if (set.size() != want) o.fail("n=" + std::to_string(n) + " wrong set size");
      auto v = verify_blocking(m, on_unit_torus(m, x), on_unit_torus(m, y), Scalar(25), set);
      if (!v.blocked) o.fail("n=" + std::to_string(n) + " a=" + std::to_string(a) + " missed " + v.witness->str());
      ++checked;
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " formula sets verified at budget 25";
  return o;
}

// Staircase: lifted diagonal sets for (x, Dx) and a large disjoint family.
Outcome criterion_3() {
  Outcome o;
  Surface m = make_staircase();
  auto deck = deck_translation(m);
  auto c = cover_map(m);
  oracle::Rng rng(303);
  size_t largest = 0;
  for (int k = 0; k < 10; ++k) {
    int f = static_cast<int>(rng.uniform(0, 5));
    auto x = at(m, f, rng.interior_fraction(11), rng.interior_fraction(13));
    auto y = deck.apply(m, x);
    TorusPoint px = project(m, c, x);
    auto lifted = lift_blocking_to_cover(m, c, torus_blocking_set_diagonal(px, 2));
    std::vector<SurfacePoint> set;
    for (const auto& p : lifted.points)
      if (!is_blocking_point(m, p) && !(p == x) && !(p == y)) set.push_back(p);
    largest = std::max(largest, set.size());
    if (set.size() > 9) o.fail("lifted set of size " + std::to_string(set.size()));
    auto v = verify_blocking(m, x, y, Scalar(25), set);
    if (!v.blocked) o.fail("lifted set misses " + v.witness->str());
  }
  // Search: a few regular pairs, then pairs of cone points.
  std::vector<std::pair<SurfacePoint, SurfacePoint>> pairs{
      {at(m, 0, Q(1, 2), Q(1, 2)), at(m, 3, Q(1, 2), Q(1, 2))},
      {at(m, 0, Q(1, 3), Q(1, 5)), at(m, 3, Q(2, 3), Q(1, 2))},
      {at(m, 0, Q(1, 2), Q(1, 2)), at(m, 1, Q(1, 2), Q(1, 2))},
  };
  const int classes = static_cast<int>(m.vertex_classes().size());
  for (int i = 0; i < classes; ++i)
    for (int j = i; j < classes; ++j) pairs.push_back({vertex_point(m, i), vertex_point(m, j)});
  size_t best = 0;
  std::string found;
  for (const auto& [x, y] : pairs) {
    auto fam = max_disjoint_family(m, segments_between(m, x, y, Scalar(25)));
    best = std::max(best, fam.members.size());
    if (fam.members.size() >= 10) {
      found = format_point(x) + "," + format_point(y) + " family " + std::to_string(fam.members.size());
      break;
    }
  }
  if (found.empty()) o.fail("search found no family above 9 (best " + std::to_string(best) + ")");
  if (o.pass)
    o.detail = "10 (x, Dx) pairs blocked by lifted sets of size <= " + std::to_string(largest) + "; search found " + found;
  return o;
}

// L(1,1): midpoint property and the lower bound at the cone point.
Outcome criterion_4() {
  Outcome o;
  Surface m = make_l_shaped(1, 1);
  oracle::Rng rng(404);
  int checked = 0;
  auto weier = weierstrass_points(m);
  while (checked < 20) {
    int f = static_cast<int>(rng.uniform(0, 2));
    auto x = at(m, f, rng.interior_fraction(11), rng.interior_fraction(13));
    if (std::find(weier.begin(), weier.end(), x) != weier.end()) continue;
    auto r = weierstrass_midpoint_check(m, x, Scalar(16));
    if (!r.verified()) o.fail("midpoint off the Weierstrass set for " + format_point(x));
    ++checked;
  }
  auto xi = vertex_point(m, 0);
  auto segs = segments_between(m, xi, xi, Scalar(25));
  auto fam = max_disjoint_family(m, segs);
  if (fam.members.size() < 9) o.fail("cone point family only " + std::to_string(fam.members.size()));
  if (o.pass)
    o.detail = "20 midpoint checks at budget 16; cone point family " + std::to_string(fam.members.size()) + " of " +
               std::to_string(segs.size()) + " segments";
  return o;
}

// Fully ramified double cover: certified non-illumination.
Outcome criterion_5() {
  Outcome o;
  Surface m = builtin("cover_grid:2,2");
  auto c = cover_map(m);
  oracle::Rng rng(505);
  int done = 0;
  while (done < 10) {
    Scalar s(rng.interior_fraction(13)), t(rng.interior_fraction(11));
    TorusPoint p = torus_reduce(s, t), q = torus_reduce(-s, -t);
    if (p == q) continue;
    auto fx = fiber(m, c, q), fy = fiber(m, c, p);
    auto x = fx[rng.uniform(0, static_cast<long>(fx.size()) - 1)];
    auto y = fy[rng.uniform(0, static_cast<long>(fy.size()) - 1)];
    auto cert = certify_non_illumination(m, x, y);
    if (!cert || !check_certificate(m, *cert)) o.fail("no certificate for " + format_point(x) + " " + format_point(y));
    auto segs = segments_between(m, x, y, Scalar(49));
    if (!segs.empty()) o.fail("found a segment " + segs.front().str());
    ++done;
  }
  if (o.pass) o.detail = "10 pairs certified, no segments up to length^2 49";
  return o;
}

// Torus-cover detection on random origamis and the golden L.
Outcome criterion_6() {
  Outcome o;
  oracle::Rng rng(606);
  int proper = 0;
  for (int k = 0; k < 20; ++k) {
    int size = static_cast<int>(rng.uniform(1, 8));
    auto [h, v] = oracle::random_origami(rng, size);
    Surface m = make_origami(h, v);
    auto c = torus_cover(m);
    if (!c.is_cover) {
      o.fail(m.name() + " not detected");
      continue;
    }
    // Over the unit square torus the degree is the square count; the
    // detected maximal torus may be a quotient of it.
    auto unit = cover_map(m);
    if (!unit.from_construction || unit.degree != size) o.fail(m.name() + " unit-torus degree differs from m");
    Rational index = abs(cross(c.u, c.w)).rational_part();
    if (c.degree * index != size) o.fail(m.name() + " degree times index is not the square count");
    if (index != 1) ++proper;
  }
  if (torus_cover(make_golden_l()).is_cover) o.fail("golden_l detected as a cover");
  if (o.pass)
    o.detail = "20 origamis: yes, unit-torus degree m (" + std::to_string(proper) +
               " with a coarser maximal torus, degree * index = m); golden_l no";
  return o;
}

// Saddle-connection directions of origamis are periodic; golden L is not.
Outcome criterion_7() {
  Outcome o;
  oracle::Rng rng(707);
  int surfaces = 0, directions = 0;
  while (surfaces < 5) {
    int size = static_cast<int>(rng.uniform(3, 7));
    auto [h, v] = oracle::random_origami(rng, size);
    if (oracle::origami_genus(h, v) < 2) continue;
    Surface m = make_origami(h, v);
    std::vector<Vec2> dirs;
    for (const auto& s : saddle_connections(m, Scalar(8))) {
      bool seen = false;
      for (const auto& d : dirs) seen = seen || same_direction(d, s.holonomy);
      if (!seen) dirs.push_back(s.holonomy);
    }
    for (const auto& d : dirs) {
      auto verdict = purely_periodic_in_direction(m, d);
      if (verdict.kind != PeriodicityVerdict::Kind::Yes) o.fail(m.name() + " direction " + d.str());
      ++directions;
    }
    ++surfaces;
  }
  auto g = purely_periodic_in_direction(make_golden_l(), {1, 0});
  if (g.kind != PeriodicityVerdict::Kind::No) o.fail("golden_l horizontal not rejected");
  if (o.pass) o.detail = std::to_string(directions) + " directions on 5 origamis periodic; golden_l (1,0) irrational";
  return o;
}

// Unfoldings of the square and the right isosceles triangle.
Outcome criterion_8() {
  Outcome o;
  RationalPolygon square{1, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)}};
  RationalPolygon tri{1, {{0, 0}, {1, 0}, {0, 1}}, {Rational(1, 2), Rational(1, 4), Rational(1, 4)}};
  for (auto [poly, area] : {std::pair{square, Scalar(1)}, std::pair{tri, Scalar(Rational(1, 2))}}) {
    auto u = unfold_billiard(poly);
    if (u.surface.genus() != 1) o.fail("genus " + std::to_string(u.surface.genus()));
    if (u.surface.area() != Scalar(static_cast<long>(u.group.size())) * area) o.fail("area mismatch");
  }
  if (o.pass) o.detail = "square (group 4) and (1/2,1/4,1/4) triangle (group 8) unfold to tori";
  return o;
}

// Torus enumeration against the lattice oracle.
Outcome criterion_9() {
  Outcome o;
  Surface m = make_torus();
  oracle::Rng rng(909);
  size_t total = 0;
  for (int k = 0; k < 100; ++k) {
    QVec x{rng.unit_fraction(), rng.unit_fraction()}, y{rng.unit_fraction(), rng.unit_fraction()};
    Q budget(rng.uniform(1, 25));
    auto segs = segments_between(m, locate(m, 0, {x.first, x.second}), locate(m, 0, {y.first, y.second}), Scalar(budget));
    std::vector<QVec> got;
    for (const auto& s : segs) got.push_back({s.holonomy.x.rational_part(), s.holonomy.y.rational_part()});
    std::sort(got.begin(), got.end());
    if (got != oracle::torus_translates(x, y, budget)) o.fail("mismatch at instance " + std::to_string(k));
    total += segs.size();
  }
  if (o.pass) o.detail = "100 instances, " + std::to_string(total) + " segments agree with the lattice oracle";
  return o;
}

// Structured CLI output is reproducible, also with parallel workers.
Outcome criterion_10() {
  Outcome o;
  std::vector<std::vector<std::string>> commands{
      {"segments", "--builtin", "octagon", "--point", "0:(1/3,1/7)", "--point", "0:(1/2,3/4)", "--budget-len-sq", "25"},
      {"block-report", "--builtin", "l_shaped:1,1", "--point", "0:(1/3,1/5)", "--point", "0:(2/3,4/5)", "--budget-len-sq",
       "16"},
      {"block-report", "--builtin", "staircase", "--vertex", "0", "--vertex", "1", "--budget-len-sq", "16"},
      {"torus-cover", "--builtin", "staircase"},
      {"cylinders", "--builtin", "golden_l", "--dir", "(1,1)"},
  };
  for (auto cmd : commands) {
    cmd.insert(cmd.end(), {"--format", "structured"});
    auto once = [&](std::vector<std::string> args) {
      std::ostringstream out, err;
      int code = cli::run(args, out, err);
      return std::to_string(code) + "\n" + out.str();
    };
    std::string a = once(cmd), b = once(cmd);
    if (a != b) o.fail(cmd[0] + " differs between runs");
    if (cmd[0] == "segments" || cmd[0] == "block-report") {
      auto par = cmd;
      par.insert(par.end(), {"--workers", "4"});
      if (once(par) != a) o.fail(cmd[0] + " differs with 4 workers");
    }
  }
  if (o.pass) o.detail = "5 commands byte-identical across runs and worker counts";
  return o;
}

const std::vector<std::function<Outcome()>> kCriteria{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
// Runtime limits in seconds, 0 for none.
const double kLimits[] = {10, 30, 120, 60, 60, 10, 60, 5, 0, 0};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) which.push_back(i);
  bool all = true;
  for (int n : which) {
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::cerr << "unknown criterion " << n << "\n";
      return 2;
    }
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      o = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream took;
    took.precision(2);
    took << std::fixed << secs << " s";
    double limit = kLimits[n - 1];
    if (limit > 0 && secs > limit) o.fail("over the " + std::to_string(static_cast<int>(limit)) + " s limit");
    o.detail += " (" + took.str() + ")";
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << "\n";
    all = all && o.pass;
  }
  return all ? 0 : 1;
}

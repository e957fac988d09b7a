#include "doctest.h"
#include "oracles.h"

#include "flatblock/autos.h"

using namespace flatblock;

namespace {

SurfacePoint random_point(oracle::Rng& rng, const Surface& m) {
  int f = static_cast<int>(rng.uniform(0, m.num_faces() - 1));
  const auto& face = m.face(f);
  // Convex combination of the first three corners stays inside the face.
  oracle::Q a = rng.interior_fraction(9), b = rng.interior_fraction(9);
  if (a + b >= 1) b = (1 - a) / 2;
  oracle::Q c = 1 - a - b;
  Vec2 p = Scalar(a) * face[0] + Scalar(b) * face[1] + Scalar(c) * face[2];
  return locate(m, f, p);
}

}  // namespace

TEST_CASE("staircase deck translation") {
  Surface m = make_staircase();
  auto d = deck_translation(m);
  CHECK(d.order == 3);
  CHECK(d.linear == Mat2::identity());
  CHECK(d.face_perm == std::vector<int>{2, 3, 4, 5, 0, 1});
  oracle::Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    auto p = random_point(rng, m);
    auto q = d.apply(m, p);
    CHECK_FALSE(q == p);
    CHECK(d.apply(m, d.apply(m, q)) == p);
  }
  CHECK_THROWS_AS(deck_translation(make_torus()), Error);
}

TEST_CASE("hyperelliptic involution") {
  for (const char* spec : {"l_shaped:1,1", "l_shaped:1/2,1/3", "golden_l"}) {
    Surface m = builtin(spec);
    auto h = hyperelliptic_involution(m);
    CHECK(h.order == 2);
    CHECK(h.linear == Mat2{-1, 0, 0, -1});
    oracle::Rng rng(2);
    for (int k = 0; k < 20; ++k) {
      auto p = random_point(rng, m);
      CHECK(h.apply(m, h.apply(m, p)) == p);
    }
    // Genus 2: six fixed points, one of them the cone point.
    auto fixed = fixed_points(m, h);
    CHECK(fixed.size() == 6);
    CHECK(std::count_if(fixed.begin(), fixed.end(), [](const FixedPoint& f) { return f.cone_point; }) == 1);
    CHECK(weierstrass_points(m).size() == 5);
    for (const auto& w : weierstrass_points(m)) CHECK(h.apply(m, w) == w);
  }
  CHECK_THROWS_AS(hyperelliptic_involution(make_staircase()), Error);
}

TEST_CASE("propagation rejects inconsistent maps") {
  Surface m = make_l_shaped(1, 1);
  CHECK_THROWS_AS(propagate_affine(m, Mat2{2, 0, 0, 1}, 0, 0, {0, 0}), Error);
  auto id = propagate_affine(m, Mat2::identity(), 0, 0, {0, 0});
  CHECK(id.order == 1);
}

TEST_CASE("midpoints of segments from x to h(x)") {
  Surface m = make_l_shaped(1, 1);
  oracle::Rng rng(3);
  int checked = 0;
  for (int k = 0; k < 10; ++k) {
    auto x = random_point(rng, m);
    auto check = weierstrass_midpoint_check(m, x, Scalar(9));
    CHECK(check.verified());
    CHECK(check.segments > 0);
    ++checked;
  }
  CHECK(checked == 10);

  // Dropping a Weierstrass point leaves some midpoint unaccounted for.
  auto w = weierstrass_points(m);
  auto x = m.face(0)[0] + Vec2(Rational(1, 7), Rational(2, 9));
  auto sx = locate(m, 0, x);
  bool caught = false;
  for (size_t drop = 0; drop < w.size(); ++drop) {
    auto fewer = w;
    fewer.erase(fewer.begin() + static_cast<long>(drop));
    auto check = weierstrass_midpoint_check(m, sx, Scalar(25), fewer);
    if (!check.verified()) {
      caught = true;
      auto mid = segment_point_at(m, *check.counterexample, Rational(1, 2));
      CHECK(mid == w[drop]);
    }
  }
  CHECK(caught);

  auto fixed = weierstrass_points(m).front();
  CHECK_THROWS_AS(weierstrass_midpoint_check(m, fixed, Scalar(4)), Error);
}

TEST_CASE("segment points by fraction") {
  Surface m = make_torus();
  auto x = locate(m, 0, {Rational(1, 10), Rational(1, 10)});
  auto y = locate(m, 0, {Rational(7, 10), Rational(1, 10)});
  auto segs = segments_between(m, x, y, Scalar(1));
  REQUIRE(segs.size() == 2);
  // Shortest goes left through the side, the other straight across.
  CHECK(segment_point_at(m, segs[0], Rational(1, 2)) == locate(m, 0, {Rational(9, 10), Rational(1, 10)}));
  CHECK(segment_point_at(m, segs[1], Rational(1, 2)) == locate(m, 0, {Rational(2, 5), Rational(1, 10)}));
  CHECK_THROWS_AS(segment_point_at(m, segs.front(), Rational(1)), Error);
}

TEST_CASE("deck translation preserves segment sets") {
  Surface m = make_staircase();
  auto d = deck_translation(m);
  oracle::Rng rng(8);
  for (int k = 0; k < 4; ++k) {
    auto x = random_point(rng, m), y = random_point(rng, m);
    if (x == y) continue;
    auto a = segments_between(m, x, y, Scalar(8));
    auto b = segments_between(m, d.apply(m, x), d.apply(m, y), Scalar(8));
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].holonomy == b[i].holonomy);
  }
}

TEST_CASE("automorphisms respect the gluings") {
  auto audit = [](const Surface& m, const AffineAuto& a) {
    for (int f = 0; f < m.num_faces(); ++f)
      for (int e = 0; e < m.num_sides(f); ++e) {
        Vec2 image = a.linear * m.edge_vector({f, e});
        int g = a.face_perm[f];
        int found = -1;
        for (int k = 0; k < m.num_sides(g); ++k)
          if (m.edge_vector({g, k}) == image) found = k;
        REQUIRE(found >= 0);
        EdgeRef p = m.partner({f, e});
        EdgeRef q = m.partner({g, found});
        CHECK(q.face == a.face_perm[p.face]);
        CHECK(m.edge_vector(q) == a.linear * m.edge_vector(p));
      }
  };
  audit(make_staircase(), deck_translation(make_staircase()));
  for (const char* spec : {"l_shaped:1,1", "golden_l"}) {
    Surface m = builtin(spec);
    audit(m, hyperelliptic_involution(m));
    auto h = hyperelliptic_involution(m);
    oracle::Rng rng(6);
    for (int k = 0; k < 100; ++k) {
      auto p = random_point(rng, m);
      CHECK(h.apply(m, h.apply(m, p)) == p);
    }
  }
}

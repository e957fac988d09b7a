#include "doctest.h"
#include "oracles.h"

#include "flatblock/surface.h"

using namespace flatblock;

namespace {

// Total cone excess: sum over vertex classes of (multiplicity - 1).
int cone_excess(const Surface& m) {
  int e = 0;
  for (const auto& c : m.vertex_classes()) e += c.multiplicity - 1;
  return e;
}

ErrorCode build_error(const RawSurface& raw) {
  try {
    Surface::build(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("surface unexpectedly valid");
  return ErrorCode::PreconditionFailed;
}

std::vector<Vec2> rect(long x0, long y0, long w, long h) { return {{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}}; }

}  // namespace

TEST_CASE("builtin invariants") {
  struct Row {
    const char* spec;
    int genus;
    const char* area;
  };
  for (Row r : {Row{"torus", 1, "1"}, Row{"torus_grid:3", 1, "1"}, Row{"staircase", 3, "6"}, Row{"l_shaped:1,1", 2, "3"},
                Row{"octagon", 2, "2+2*sqrt(2)"},
                Row{"cover_grid:2,2", 3, "2"}}) {
    CAPTURE(r.spec);
    Surface m = builtin(r.spec);
    CHECK(m.genus() == r.genus);
    CHECK(2 * m.genus() - 2 == cone_excess(m));
    CHECK(m.area() == Scalar::parse(r.area));
  }
  Scalar a(Rational(-1, 2), Rational(1, 2), 5);
  Surface g = builtin("golden_l");
  CHECK(g.genus() == 2);
  CHECK(g.area() == Scalar(1) + a + a);
}

TEST_CASE("origami genus matches the commutator oracle") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    int size = static_cast<int>(rng.uniform(1, 9));
    auto [h, v] = oracle::random_origami(rng, size);
    Surface m = make_origami(h, v);
    CHECK(m.genus() == oracle::origami_genus(h, v));
    CHECK(m.area() == Scalar(size));
    CHECK(2 * m.genus() - 2 == cone_excess(m));
  }
}

TEST_CASE("gluing translations are consistent") {
  for (const char* spec : {"staircase", "golden_l", "octagon", "cover_grid:2,2"}) {
    Surface m = builtin(spec);
    for (int f = 0; f < m.num_faces(); ++f)
      for (int e = 0; e < m.num_sides(f); ++e) {
        EdgeRef a{f, e};
        EdgeRef b = m.partner(a);
        CHECK(m.partner(b) == a);
        CHECK(m.edge_vector(a) == -m.edge_vector(b));
        CHECK(m.gluing_translation(a) == -m.gluing_translation(b));
        CHECK(m.vertex(f, e) + m.gluing_translation(a) == m.vertex(b.face, (b.edge + 1) % m.num_sides(b.face)));
      }
  }
}

TEST_CASE("serialize and parse round trip") {
  for (const char* spec : {"torus", "staircase", "l_shaped:1/2,1/3", "golden_l", "octagon", "cover_grid:2,2"}) {
    Surface m = builtin(spec);
    std::string text = serialize_surface(m);
    Surface back = parse_surface(text);
    CHECK(serialize_surface(back) == text);
    CHECK(back.genus() == m.genus());
    CHECK(back.area() == m.area());
    CHECK(back.name() == m.name());
  }
}

TEST_CASE("validation errors") {
  RawSurface raw;
  raw.faces = {rect(0, 0, 1, 1)};
  raw.gluings = {{{0, 0}, {0, 1}}, {{0, 2}, {0, 3}}};
  CHECK(build_error(raw) == ErrorCode::NonParallelGluing);

  raw.faces = {{{0, 0}, {2, 0}, {1, 1}, {2, 2}, {0, 2}}};
  raw.gluings = {};
  CHECK(build_error(raw) == ErrorCode::NonConvexFace);

  raw.faces = {rect(0, 0, 1, 1), rect(0, 0, 1, 1)};
  raw.gluings = {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}, {{1, 0}, {1, 2}}, {{1, 1}, {1, 3}}};
  CHECK(build_error(raw) == ErrorCode::Disconnected);

  raw.faces = {rect(0, 0, 1, 1)};
  raw.gluings = {{{0, 0}, {0, 2}}};
  CHECK(build_error(raw) == ErrorCode::BadGluing);

  raw.faces = {rect(0, 0, 1, 1)};
  raw.gluings = {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}};
  raw.field_d = 2;
  raw.faces[0][2] = {Scalar::sqrt_of(3), 1};
  CHECK_THROWS(Surface::build(raw));

  CHECK_THROWS_AS(builtin("nonsense"), Error);
  try {
    make_origami({1, 0, 2}, {1, 0, 2});
    FAIL("expected NotTransitive");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotTransitive);
  }
}

TEST_CASE("points canonicalize") {
  Surface m = make_torus();
  auto a = locate(m, 0, {1, Rational(1, 3)});
  auto b = locate(m, 0, {0, Rational(1, 3)});
  CHECK(a == b);
  CHECK(a.kind == PointKind::Edge);
  CHECK(locate(m, 0, {1, 1}).kind == PointKind::Vertex);
  CHECK(locate(m, 0, {1, 1}) == locate(m, 0, {0, 0}));
  CHECK_THROWS_AS(locate(m, 0, {2, 0}), Error);
  auto p = parse_point(m, "0:(1/2,1/3)");
  CHECK(format_point(p) == "0:(1/2,1/3)");
  CHECK(parse_point(m, format_point(a)) == a);
  CHECK(local_copies(m, locate(m, 0, {0, 0})).size() == 4);
  CHECK_FALSE(is_blocking_point(m, locate(m, 0, {0, 0})));
  CHECK(is_blocking_point(make_staircase(), vertex_point(make_staircase(), 0)));
}

TEST_CASE("linear action preserves area and genus") {
  Surface m = make_l_shaped(1, 1);
  Mat2 g{1, 1, 0, 1};
  Surface n = gl2_act(m, g);
  CHECK(n.area() == m.area());
  CHECK(n.genus() == m.genus());
  Mat2 stretch{2, 0, 0, 1};
  CHECK(gl2_act(m, stretch).area() == Scalar(6));
  CHECK_THROWS_AS(gl2_act(m, Mat2{0, 1, 1, 0}), Error);
}

TEST_CASE("branched cover grid monodromy") {
  for (auto [n, k] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
    {
      auto shifts = find_full_ramification_shifts(n, k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(grid_vertex_monodromy(n, k, shifts, i, j) != 0);
      Surface m = make_branched_cover_grid(n, k, shifts);
      CHECK(m.area() == Scalar(k));
      CHECK(m.num_faces() == k * n * n);
      CHECK(2 * m.genus() - 2 == cone_excess(m));
    }
  }
  // Nine odd monodromies cannot sum to zero mod 2.
  CHECK_THROWS_AS(find_full_ramification_shifts(3, 2), Error);
  CHECK_THROWS_AS(make_branched_cover_grid(1, 2, {0, 0}), Error);
}

TEST_CASE("rectilinear split covers the polygon") {
  std::vector<Vec2> ell{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  auto split = split_rectilinear(ell);
  CHECK(split.faces.size() == 3);
  CHECK(split.boundary.size() == ell.size());
  CHECK(split.boundary[0].size() == 2);
  CHECK_THROWS_AS(split_rectilinear({{0, 0}, {1, 0}, {0, 1}}), Error);
}

TEST_CASE("billiard unfoldings") {
  RationalPolygon square;
  square.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  square.angles = {Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)};
  auto us = unfold_billiard(square);
  CHECK(us.group.size() == 4);
  CHECK(us.surface.genus() == 1);
  CHECK(us.surface.area() == Scalar(4));
  CHECK(us.lift({Rational(1, 3), Rational(1, 5)}).size() == 4);

  RationalPolygon tri;
  tri.vertices = {{0, 0}, {1, 0}, {0, 1}};
  tri.angles = {Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  auto ut = unfold_billiard(tri);
  CHECK(ut.group.size() == 8);
  CHECK(ut.surface.genus() == 1);
  CHECK(ut.surface.area() == Scalar(Rational(8, 2)));

  RationalPolygon bad = tri;
  bad.angles = {Rational(1, 2), Rational(1, 3), Rational(1, 6)};
  CHECK_THROWS_AS(unfold_billiard(bad), Error);
}

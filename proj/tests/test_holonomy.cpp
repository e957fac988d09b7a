#include "doctest.h"
#include "oracles.h"

#include "flatblock/holonomy.h"

using namespace flatblock;

namespace {

// Index of the lattice spanned by u, w inside Z^2, for integral vectors.
Rational lattice_index(const Vec2& u, const Vec2& w) { return abs(cross(u, w)).rational_part(); }

}  // namespace

TEST_CASE("torus and grids") {
  for (const char* spec : {"torus", "torus_grid:2", "torus_grid:3"}) {
    auto v = torus_cover(builtin(spec));
    CHECK(v.is_cover);
    CHECK(v.degree == 1);
    CHECK(v.u == Vec2(1, 0));
    CHECK(v.w == Vec2(0, 1));
  }
}

TEST_CASE("random origamis cover the torus") {
  oracle::Rng rng(9);
  for (int k = 0; k < 40; ++k) {
    int size = static_cast<int>(rng.uniform(1, 8));
    auto [h, v] = oracle::random_origami(rng, size);
    Surface m = make_origami(h, v);
    auto c = torus_cover(m);
    CAPTURE(m.name());
    REQUIRE(c.is_cover);
    CHECK(cross(c.u, c.w).sign() > 0);
    CHECK(c.degree * lattice_index(c.u, c.w) == size);
    int excess = 0;
    for (const auto& b : c.branch_points) excess += b.multiplicity - 1;
    CHECK(excess == 2 * m.genus() - 2);
    CHECK(c.group.discrete());
  }
}

TEST_CASE("non-lattice surfaces") {
  for (const char* spec : {"golden_l", "octagon"}) {
    auto v = torus_cover(builtin(spec));
    CHECK_FALSE(v.is_cover);
    CHECK(v.witness.size() >= 2);
    CHECK_FALSE(v.group.discrete());
  }
  auto g = torus_cover(make_golden_l());
  REQUIRE(g.witness.size() == 2);
  CHECK(cross(g.witness[0], g.witness[1]).is_zero());
}

TEST_CASE("staircase quotient") {
  auto v = torus_cover(make_staircase());
  REQUIRE(v.is_cover);
  CHECK(v.degree == 3);
  CHECK(v.u == Vec2(1, 1));
  CHECK(v.w == Vec2(-1, 1));
  CHECK(v.branch_points.size() == 2);
  for (const auto& b : v.branch_points) CHECK(b.multiplicity == 3);
}

TEST_CASE("fibers have degree many points") {
  oracle::Rng rng(4);
  for (const char* spec : {"staircase", "l_shaped:1,1", "cover_grid:2,2", "l_shaped:1/2,1/3"}) {
    Surface m = builtin(spec);
    auto c = cover_map(m);
    for (int k = 0; k < 10; ++k) {
      TorusPoint p = torus_reduce(Scalar(rng.interior_fraction(31)), Scalar(rng.interior_fraction(29)));
      auto fib = fiber(m, c, p);
      CHECK(Rational(static_cast<long>(fib.size())) == c.degree);
      for (const auto& q : fib) CHECK(project(m, c, q) == p);
      CHECK(std::is_sorted(fib.begin(), fib.end()));
    }
  }
}

TEST_CASE("torus point text") {
  TorusPoint p = torus_reduce(Scalar(Rational(-1, 3)), Scalar(Rational(7, 4)));
  CHECK(p.str() == "[2/3,3/4]");
  CHECK(parse_torus_point(p.str()) == p);
  CHECK_THROWS_AS(cover_map(make_golden_l()), Error);
}

namespace {

// Shortest nonzero combination found among integer combinations of the
// generators: all pairs up to 20, all triples up to 6, then random ones.
std::optional<Scalar> shortest_sampled(const std::vector<Vec2>& gens, oracle::Rng& rng, int samples) {
  std::optional<Scalar> best;
  auto consider = [&](const Vec2& v) {
    if (v == Vec2()) return;
    Scalar n = norm_sq(v);
    if (!best || n < *best) best = n;
  };
  for (size_t a = 0; a < gens.size(); ++a)
    for (size_t b = a + 1; b < gens.size(); ++b)
      for (long i = -20; i <= 20; ++i)
        for (long j = -20; j <= 20; ++j) consider(Scalar(i) * gens[a] + Scalar(j) * gens[b]);
  for (size_t a = 0; a < gens.size(); ++a)
    for (size_t b = a + 1; b < gens.size(); ++b)
      for (size_t c = b + 1; c < gens.size(); ++c)
        for (long i = -6; i <= 6; ++i)
          for (long j = -6; j <= 6; ++j)
            for (long l = -6; l <= 6; ++l) consider(Scalar(i) * gens[a] + Scalar(j) * gens[b] + Scalar(l) * gens[c]);
  for (int k = 0; k < samples; ++k) {
    Vec2 v;
    for (const auto& g : gens) v += Scalar(rng.uniform(-20, 20)) * g;
    consider(v);
  }
  return best;
}

}  // namespace

TEST_CASE("absolute holonomy") {
  auto t = absolute_holonomy(make_torus());
  CHECK(t.z_rank == 2);
  CHECK(t.span_dim == 2);
  REQUIRE(t.lattice_basis);
  CHECK(t.lattice_basis->first == Vec2(1, 0));
  CHECK(t.lattice_basis->second == Vec2(0, 1));
  auto g = absolute_holonomy(make_golden_l());
  CHECK(g.z_rank > g.span_dim);
  CHECK_FALSE(g.lattice_basis);

  auto l = torus_cover(make_l_shaped(1, 1));
  REQUIRE(l.is_cover);
  CHECK(l.degree == 3);
  CHECK(l.u == Vec2(1, 0));
  CHECK(l.w == Vec2(0, 1));
  CHECK(l.branch_points.size() == 1);
}

TEST_CASE("discreteness agrees with a short vector search") {
  oracle::Rng rng(17);
  std::vector<Surface> lattice{make_staircase(), make_l_shaped(1, 1), builtin("l_shaped:1/2,1/3"),
                               builtin("cover_grid:2,2")};
  for (int k = 0; k < 10; ++k) {
    auto [h, v] = oracle::random_origami(rng, static_cast<int>(rng.uniform(2, 7)));
    lattice.push_back(make_origami(h, v));
  }
  for (const auto& m : lattice) {
    CAPTURE(m.name());
    auto grp = absolute_holonomy(m);
    REQUIRE(grp.discrete());
    REQUIRE(grp.lattice_basis);
    auto [u, w] = *grp.lattice_basis;
    Scalar shortest = std::min(norm_sq(u), norm_sq(w));
    shortest = std::min(shortest, std::min(norm_sq(u + w), norm_sq(u - w)));
    auto found = shortest_sampled(grp.generators, rng, 2000);
    REQUIRE(found);
    CHECK(*found * Scalar(4) >= shortest);
  }
  for (const char* spec : {"golden_l", "octagon"}) {
    auto grp = absolute_holonomy(builtin(spec));
    CHECK_FALSE(grp.discrete());
    Scalar gen_min = norm_sq(grp.generators.front());
    for (const auto& v : grp.generators)
      if (v != Vec2()) gen_min = std::min(gen_min, norm_sq(v));
    auto found = shortest_sampled(grp.generators, rng, 2000);
    REQUIRE(found);
    CHECK(*found * Scalar(16) < gen_min);
  }
}

TEST_CASE("linear images map the holonomy group") {
  Mat2 g{2, 1, 1, 1};
  for (const char* spec : {"staircase", "golden_l", "l_shaped:1,1"}) {
    Surface m = builtin(spec);
    auto before = absolute_holonomy(m), after = absolute_holonomy(gl2_act(m, g));
    CHECK(before.discrete() == after.discrete());
    REQUIRE(before.generators.size() == after.generators.size());
    std::vector<Vec2> mapped;
    for (const auto& v : before.generators) mapped.push_back(g * v);
    CHECK(std::is_permutation(mapped.begin(), mapped.end(), after.generators.begin(), after.generators.end()));
  }
}

TEST_CASE("grid covers against the fine lattice") {
  for (auto [n, k] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
    Surface m = make_branched_cover_grid(n, k, find_full_ramification_shifts(n, k));
    auto c = cover_map(m);
    CHECK(c.from_construction);
    CHECK(c.degree == k);
    auto v = torus_cover(m);
    REQUIRE(v.is_cover);
    // Index of the detected lattice inside (1/n) Z^2.
    Rational index = abs(cross(v.u, v.w)).rational_part() * n * n;
    CHECK(v.degree * index == k * n * n);
  }
}

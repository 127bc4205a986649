#include <doctest.h>

#include <cmath>

#include "speclab/geometry.hpp"
#include "speclab/rng.hpp"

using namespace speclab;

TEST_CASE("build_grid basics") {
  const TorusGrid g = build_grid(8, kTwoPi);
  CHECK(g.spacing == doctest::Approx(kTwoPi / 8).epsilon(1e-15));
  CHECK(std::fabs(g.spacing * g.n_side - g.side_length) <= 1e-15 * g.side_length);
  CHECK(build_grid(64, kTwoPi).cell_count() == 4096);
  CHECK_THROWS_WITH_AS(build_grid(7, kTwoPi), "build_grid: n_side must be even >= 8",
                       std::invalid_argument);
  CHECK_THROWS_AS(build_grid(6, kTwoPi), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(16, -1.0), std::invalid_argument);
}

TEST_CASE("periodic index arithmetic is total") {
  const TorusGrid g = build_grid(8, 1.0);
  CHECK(g.index(-1, 0) == 7);
  CHECK(g.index(8, 3) == 3 * 8);
  CHECK(g.index(-9, -9) == 7 * 8 + 7);
  CHECK(g.cell_of(0.999, 0.0) == 0);  // wraps to the nearest node
}

TEST_CASE("geodesic distance on the flat torus") {
  const TorusGrid g = build_grid(16, kTwoPi);
  const double pi = kTwoPi / 2;
  CHECK(geodesic_distance({0, 0}, {pi, pi}, g) == doctest::Approx(pi * std::sqrt(2.0)));
  CHECK(geodesic_distance({1.3, 2.2}, {1.3, 2.2}, g) == 0.0);
  CHECK(geodesic_distance({0, 0}, {3 * pi / 2, 0}, g) == doctest::Approx(pi / 2));
}

TEST_CASE("geodesic distance is a metric on sampled triples") {
  const TorusGrid g = build_grid(16, kTwoPi);
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point2 a{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
    const Point2 b{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
    const Point2 c{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
    const double ab = geodesic_distance(a, b, g);
    const double ba = geodesic_distance(b, a, g);
    CHECK(ab == ba);
    CHECK(ab <= geodesic_distance(a, c, g) + geodesic_distance(c, b, g) + 1e-12);
  }
}

TEST_CASE("antipodal set of the origin") {
  const TorusGrid g = build_grid(16, kTwoPi);
  const double pi = kTwoPi / 2;
  const auto anti = antipodal_set({0, 0}, g, g.spacing);
  REQUIRE(!anti.empty());
  for (const Point2& q : anti)
    CHECK(geodesic_distance(q, {pi, pi}, g) <= g.spacing * std::sqrt(2.0) + 1e-12);

  // paper example on the unit torus: q = (1/2, 1/2)
  const TorusGrid gu = build_grid(16, 1.0);
  const auto anti_u = antipodal_set({0, 0}, gu, gu.spacing);
  bool found = false;
  for (const Point2& q : anti_u)
    if (geodesic_distance(q, {0.5, 0.5}, gu) <= gu.spacing + 1e-12) found = true;
  CHECK(found);
}

TEST_CASE("antipodal set is nonempty and contains the half-period translate") {
  const TorusGrid g = build_grid(12, kTwoPi);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Point2 p{rng.uniform(0, kTwoPi), rng.uniform(0, kTwoPi)};
    const auto anti = antipodal_set(p, g, g.spacing);
    CHECK(!anti.empty());
    const double L = g.side_length;
    const Point2 target{std::fmod(p.x + L / 2, L), std::fmod(p.y + L / 2, L)};
    // nearest grid node to the exact antipode must be in the set
    bool found = false;
    for (const Point2& q : anti)
      if (geodesic_distance(q, target, g) <= g.spacing * std::sqrt(2.0) / 2 + 1e-9) found = true;
    CHECK(found);
  }
}

TEST_CASE("observation set bookkeeping") {
  const TorusGrid g = build_grid(16, kTwoPi);
  const ObservationSet o = strip(g, 0, kTwoPi / 2, 0.3);
  CHECK(o.measure > 0.0);
  CHECK(o.measure < kTwoPi * kTwoPi);
  CHECK(o.connected_flag);
  CHECK(o.cell_count_true() > 0);
  CHECK_THROWS_AS(make_observation(g, std::vector<std::uint8_t>(g.cell_count(), 0)),
                  std::invalid_argument);

  const ObservationSet two = set_union(disc(g, {1.0, 1.0}, 0.5), disc(g, {4.0, 4.0}, 0.5));
  CHECK(!two.connected_flag);
}

TEST_CASE("gcc: whole torus is satisfied") {
  const TorusGrid g = build_grid(16, kTwoPi);
  const auto rep = check_gcc(whole_torus(g), 1.0);
  CHECK(rep.verdict == GccVerdict::satisfied);
}

TEST_CASE("gcc: horizontal strip is violated by the closed horizontal geodesic") {
  const TorusGrid g = build_grid(32, kTwoPi);
  const ObservationSet o = strip(g, 0, kTwoPi / 2, 0.3);
  const auto rep = check_gcc(o, 100.0);
  REQUIRE(rep.verdict == GccVerdict::violated);
  REQUIRE(rep.witness.has_value());
  CHECK(std::fabs(rep.witness->direction.y) <= 1e-12);
  CHECK(!o.contains_point(rep.witness->start.x, rep.witness->start.y));
}

TEST_CASE("gcc: cross of strips is satisfied") {
  const TorusGrid g = build_grid(32, kTwoPi);
  const ObservationSet o = cross(g, kTwoPi / 2, 0.0, 0.4);
  const auto rep = check_gcc(o, 10.0);
  CHECK(rep.verdict == GccVerdict::satisfied);
}

TEST_CASE("gcc verdicts are monotone in T and in O") {
  const TorusGrid g = build_grid(16, kTwoPi);
  const ObservationSet small_cross = cross(g, kTwoPi / 2, 0.0, 0.45);
  const ObservationSet big_cross = cross(g, kTwoPi / 2, 0.0, 0.9);
  const auto rep_small_T = check_gcc(small_cross, 10.0, 24, 16);
  if (rep_small_T.verdict == GccVerdict::satisfied) {
    CHECK(check_gcc(small_cross, 20.0, 24, 16).verdict == GccVerdict::satisfied);
    CHECK(check_gcc(big_cross, 10.0, 24, 16).verdict != GccVerdict::violated);
  }
  CHECK_THROWS_AS(check_gcc(small_cross, 10.0, 8, 16), std::invalid_argument);
  CHECK_THROWS_AS(check_gcc(small_cross, -1.0), std::invalid_argument);
}

TEST_CASE("hypothesis (H): cross holds with witness at the origin") {
  const TorusGrid g = build_grid(32, kTwoPi);
  const double pi = kTwoPi / 2;
  const ObservationSet o = cross(g, pi, 0.0, 0.45);
  const auto rep = check_hypothesis_H(o, g, 20.0);
  REQUIRE(rep.holds);
  REQUIRE(rep.witness_p.has_value());
  CHECK(geodesic_distance(*rep.witness_p, {0, 0}, g) <= 1e-12);
}

TEST_CASE("hypothesis (H): small disc fails") {
  const TorusGrid g = build_grid(16, kTwoPi);
  const ObservationSet o = disc(g, {0, 0}, 0.8);
  const auto rep = check_hypothesis_H(o, g, 20.0);
  CHECK(!rep.holds);
}

TEST_CASE("hypothesis (H): whole torus minus one cell holds") {
  const TorusGrid g = build_grid(16, kTwoPi);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.cell_count()), 1);
  mask[static_cast<std::size_t>(g.index(3, 5))] = 0;
  const auto rep = check_hypothesis_H(make_observation(g, std::move(mask)), g, 10.0);
  CHECK(rep.holds);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "valf/planar_body.hpp"

using namespace valf;

TEST_CASE("minkowski_sum") {
  SUBCASE("discs add support functions") {
    const auto d = minkowski_sum(PlanarBody::disc(), PlanarBody::disc());
    CHECK(d.support_fn().a(0) == 2.0);
    CHECK(area(d) == doctest::Approx(4 * kPi).epsilon(1e-14));
  }
  SUBCASE("square plus square") {
    const auto s = minkowski_sum(PlanarBody::square(), PlanarBody::square());
    CHECK(s.vertices().size() == 4);
    CHECK(area(s) == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("square plus disc, against a polygonal oracle") {
    const auto sq = PlanarBody::square();
    const double oracle = oracle::polygon_plus_disc_area(sq.vertices(), 1.0);
    CHECK(oracle == doctest::Approx(1 + 4 + kPi).epsilon(1e-6));
    const auto mixed = minkowski_sum(sq, PlanarBody::disc());
    CHECK(mixed.approximate());
    CHECK(std::abs(area(mixed) - oracle) < 1e-4);
  }
  SUBCASE("edge merge agrees with the hull of pairwise sums") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 30; ++i) {
      const auto a = random_polygon(rng);
      const auto b = random_polygon(rng);
      CHECK(area(minkowski_sum(a, b)) ==
            doctest::Approx(oracle::hull_sum_area(a.vertices(), b.vertices())).epsilon(1e-12));
    }
  }
  SUBCASE("segments and points") {
    const auto seg = PlanarBody::segment({0, 0}, {0, 1});
    const auto rect = minkowski_sum(PlanarBody::segment({0, 0}, {2, 0}), seg);
    CHECK(area(rect) == doctest::Approx(2.0));
    CHECK(area(minkowski_sum(PlanarBody::point({3, 4}), PlanarBody::square())) == doctest::Approx(1.0));
  }
}

TEST_CASE("construction rejects invalid bodies") {
  CHECK_THROWS_AS(PlanarBody::support(TrigPoly({1.0, 0.0, 0.5})), std::invalid_argument);
  CHECK_THROWS_AS(PlanarBody::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(PlanarBody::polygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PlanarBody::polygon({{0, 0}, {1, 0}, {1, 0}}), std::invalid_argument);
  CHECK_NOTHROW(PlanarBody::support(TrigPoly({1.0, 0.0, 0.2})));
}

TEST_CASE("area") {
  CHECK(area(PlanarBody::disc()) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(area(PlanarBody::square()) == 1.0);
  const auto body = PlanarBody::support(TrigPoly({1.0, 0.0, 0.1}));
  const auto& h = body.support_fn();
  const auto r = h.plus_second_derivative();
  const double quad = 0.5 * oracle::circle_quadrature([&](double t) { return h(t) * r(t); }, 1000000);
  CHECK(std::abs(area(body) - quad) <= 1e-10);
}

TEST_CASE("area_measure") {
  SUBCASE("disc") {
    const auto m = area_measure(PlanarBody::disc());
    CHECK(m.atoms.empty());
    CHECK(m.density.a(0) == 1.0);
  }
  SUBCASE("square atoms at the edge normals") {
    const auto m = area_measure(PlanarBody::square());
    REQUIRE(m.atoms.size() == 4);
    const double expected[] = {3 * kPi / 2, 0.0, kPi / 2, kPi};
    for (int i = 0; i < 4; ++i) {
      CHECK(m.atoms[i].angle == doctest::Approx(expected[i]));
      CHECK(m.atoms[i].mass == doctest::Approx(1.0));
    }
  }
  SUBCASE("h + h'' against finite differences") {
    const auto body = PlanarBody::support(TrigPoly({1.0, 0.0, 0.0, 0.1}));
    const auto m = area_measure(body);
    CHECK(m.density.a(3) == doctest::Approx(-0.8).epsilon(1e-15));
    const auto& h = body.support_fn();
    const double dt = 1e-4;
    for (double t : {0.2, 1.0, 2.5}) {
      const double fd = h(t) + (h(t + dt) - 2 * h(t) + h(t - dt)) / (dt * dt);
      CHECK(m.density(t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  SUBCASE("total mass is the perimeter and the centroid vanishes") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
      const auto p = random_polygon(rng);
      const auto m = area_measure(p);
      double per = 0.0;
      const auto& v = p.vertices();
      for (std::size_t j = 0; j < v.size(); ++j) {
        const auto d = v[(j + 1) % v.size()] - v[j];
        per += std::hypot(d.x, d.y);
      }
      CHECK(m.total_mass() == doctest::Approx(per).epsilon(1e-14));
      CHECK(std::abs(m.centroid()[0]) <= 1e-12);
      CHECK(std::abs(m.centroid()[1]) <= 1e-12);
      const auto s = random_smooth_body(rng);
      const auto ms = area_measure(s);
      CHECK(std::abs(ms.centroid()[0]) <= 1e-12);
      CHECK(std::abs(ms.centroid()[1]) <= 1e-12);
    }
  }
  SUBCASE("integration against a polygon is the atom sum") {
    const auto p = PlanarBody::regular_polygon(5, 1.3, 0.2);
    const TrigPoly g({0.3, -1.0, 0.5}, {0.2, 0.7});
    double sum = 0.0;
    const auto& v = p.vertices();
    for (std::size_t j = 0; j < v.size(); ++j) {
      const auto d = v[(j + 1) % v.size()] - v[j];
      sum += std::hypot(d.x, d.y) * g(std::atan2(-d.x, d.y));
    }
    CHECK(area_measure(p).integrate(g) == doctest::Approx(sum).epsilon(1e-14));
  }
}

TEST_CASE("mixed_volume") {
  const auto sq = PlanarBody::square();
  const auto disc = PlanarBody::disc();
  CHECK(mixed_volume(sq, sq) == doctest::Approx(1.0));
  SUBCASE("V(square, disc) from a Steiner quadratic fit") {
    std::vector<double> eps{0.0, 0.5, 1.0};
    std::vector<double> vals;
    for (double e : eps) vals.push_back(e == 0.0 ? 1.0 : oracle::polygon_plus_disc_area(sq.vertices(), e));
    const auto c = oracle::poly_fit(eps, vals, 2);
    CHECK(c[1] / 2 == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(mixed_volume(sq, disc) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(mixed_volume(disc, sq) == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("symmetry, V(A,A) = area, central symmetry") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
      const auto a = random_smooth_body(rng);
      const auto b = random_smooth_body(rng);
      const auto p = random_polygon(rng);
      CHECK(std::abs(mixed_volume(a, b) - mixed_volume(b, a)) <= 1e-10);
      CHECK(std::abs(mixed_volume(a, p) - mixed_volume(p, a)) <= 1e-10);
      CHECK(std::abs(mixed_volume(a, a) - area(a)) <= 1e-10);
      CHECK(std::abs(mixed_volume(p, p) - area(p)) <= 1e-12);
    }
    const auto hex = PlanarBody::regular_polygon(6);
    CHECK(mixed_volume(hex, reflect(hex)) == doctest::Approx(mixed_volume(hex, hex)));
  }
}

TEST_CASE("Steiner polynomiality and bilinearity") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    const auto a = random_smooth_body(rng);
    const auto b = random_smooth_body(rng);
    std::vector<double> eps{0.0, 0.5, 1.0, 1.5, 2.0};
    std::vector<double> vals;
    for (double e : eps) {
      const auto eb = PlanarBody::support(e * b.support_fn());
      vals.push_back(area(minkowski_sum(a, eb)));
    }
    const auto c = oracle::poly_fit(eps, vals, 3);
    CHECK(std::abs(c[3]) <= 1e-9);
    const auto a2 = random_smooth_body(rng);
    CHECK(std::abs(mixed_volume(minkowski_sum(a, a2), b) - mixed_volume(a, b) - mixed_volume(a2, b)) <= 1e-10);
  }
}

TEST_CASE("projection derivative: d/dε area(A + εB) = |f(A)| for a vertical unit segment B") {
  std::mt19937_64 rng(12);
  const auto seg = PlanarBody::segment({0, 0}, {0, 1});
  for (int i = 0; i < 30; ++i) {
    const auto a = random_polygon(rng);
    std::vector<double> eps{0.0, 0.5, 1.0};
    std::vector<double> vals;
    for (double e : eps) vals.push_back(area(minkowski_sum(a, PlanarBody::segment({0, 0}, {0, e}))));
    const auto c = oracle::poly_fit(eps, vals, 2);
    double lo = 1e300;
    double hi = -1e300;
    for (auto v : a.vertices()) {
      lo = std::min(lo, v.x);
      hi = std::max(hi, v.x);
    }
    CHECK(std::abs(c[1] - (hi - lo)) <= 1e-8);
    CHECK(std::abs(2 * mixed_volume(a, seg) - (hi - lo)) <= 1e-12);
  }
}

TEST_CASE("transform_body") {
  const auto disc = PlanarBody::disc();
  CHECK(rotate(disc, 0.77).support_fn().max_coeff_diff(disc.support_fn()) < 1e-15);
  std::mt19937_64 rng(2);
  const auto a = random_smooth_body(rng);
  const auto r = reflect(a);
  for (double t : {0.0, 1.0, 2.0}) CHECK(r.support_at(t) == doctest::Approx(a.support_at(t + kPi)).epsilon(1e-12));
  const auto sq = PlanarBody::square();
  const auto j = transform_body(PlanarBody::hull({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}), rotation(kPi / 2));
  CHECK(area(j) == doctest::Approx(area(sq)));
  CHECK(j.support_at(0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(transform_body(sq, {1, 2, 2, 4}), std::invalid_argument);
  SUBCASE("orientation-reversing orthogonal map") {
    const Mat2 g{std::cos(0.4), std::sin(0.4), std::sin(0.4), -std::cos(0.4)};
    const auto ga = transform_body(a, g);
    for (double t : {0.3, 1.9, 4.0}) {
      const Vec2 u{std::cos(t), std::sin(t)};
      const Vec2 w{g[0] * u.x + g[2] * u.y, g[1] * u.x + g[3] * u.y};
      CHECK(ga.support_at(t) == doctest::Approx(a.support_at(std::atan2(w.y, w.x))).epsilon(1e-12));
    }
  }
  SUBCASE("general linear map is approximate") {
    const auto ga = transform_body(disc, {2, 0, 0, 1});
    CHECK(ga.approximate());
    CHECK(area(ga) == doctest::Approx(2 * kPi).epsilon(1e-4));
  }
}

TEST_CASE("support_coefficients of polygons") {
  const auto sq = PlanarBody::hull({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  const auto h = support_coefficients(sq, 64);
  CHECK(h.a(0) == doctest::Approx(8.0 / kTwoPi).epsilon(1e-14));
  const auto p = PlanarBody::regular_polygon(7, 1.0, 0.3);
  const auto hp = support_coefficients(translate(p, {0.2, -0.4}), 200);
  for (double t : {0.1, 1.3, 3.0, 5.5}) CHECK(hp(t) == doctest::Approx(translate(p, {0.2, -0.4}).support_at(t)).epsilon(2e-3));
  const auto pt = support_coefficients(PlanarBody::point({2, 3}), 4);
  CHECK(pt.a(1) == doctest::Approx(2.0));
  CHECK(pt.b(1) == doctest::Approx(3.0));
}

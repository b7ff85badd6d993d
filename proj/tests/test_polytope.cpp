#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "valf/numerics.hpp"
#include "valf/polytope.hpp"

using namespace valf;

namespace {

std::vector<Eigen::Vector3d> to3(const std::vector<VecX>& v) { return {v.begin(), v.end()}; }

std::vector<Vec2> to2(const std::vector<VecX>& v) {
  std::vector<Vec2> out;
  for (const auto& p : v) out.push_back({p(0), p(1)});
  return out;
}

}  // namespace

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const auto& r = gauss_legendre(5);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 8);
  CHECK(s == doctest::Approx(2.0 / 9).epsilon(1e-14));
}

TEST_CASE("polyfit recovers a cubic") {
  std::vector<double> x{0, 0.5, 1, 1.5, 2};
  std::vector<double> y;
  for (double t : x) y.push_back(1 - 2 * t + 0.5 * t * t * t);
  const auto fit = polyfit(x, y, 3);
  CHECK(fit.coeffs(0) == doctest::Approx(1.0));
  CHECK(fit.coeffs(1) == doctest::Approx(-2.0));
  CHECK(std::abs(fit.coeffs(2)) < 1e-12);
  CHECK(fit.coeffs(3) == doctest::Approx(0.5));
  CHECK(fit.relative_residual < 1e-13);
}

TEST_CASE("convex_hull3") {
  SUBCASE("cube with interior and face points") {
    std::vector<Eigen::Vector3d> pts;
    for (int m = 0; m < 8; ++m) pts.emplace_back(m & 1, m >> 1 & 1, m >> 2 & 1);
    pts.emplace_back(0.5, 0.5, 0.5);
    pts.emplace_back(0.5, 0.5, 1.0);
    const auto h = convex_hull3(pts);
    CHECK(h.volume() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h.surface_area() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(h.points.size() == 8);
  }
  SUBCASE("random point clouds against slab integration") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int i = 0; i < 20; ++i) {
      std::vector<Eigen::Vector3d> pts;
      for (int j = 0; j < 30; ++j) pts.emplace_back(g(rng), g(rng), g(rng));
      CHECK(convex_hull3(pts).volume() == doctest::Approx(oracle::slab_volume(pts)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(convex_hull3({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}), std::invalid_argument);
}

TEST_CASE("Polytope reduction and volume") {
  const auto sq = Polytope::box(VecX::Zero(2), VecX::Ones(2));
  CHECK(sq.vertices().size() == 4);
  CHECK(sq.volume() == doctest::Approx(1.0));
  CHECK(sq.affine_dim() == 2);
  const auto seg3 = Polytope(3, {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(0.5, 0.5, 0.5)});
  CHECK(seg3.affine_dim() == 1);
  CHECK(seg3.vertices().size() == 2);
  CHECK(seg3.volume() == 0.0);
  const auto tri3 = Polytope(3, {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0),
                                 Eigen::Vector3d(0.2, 0.2, 0)});
  CHECK(tri3.affine_dim() == 2);
  CHECK(tri3.vertices().size() == 3);
  CHECK(Polytope::interval(2.0, -1.0).volume() == doctest::Approx(3.0));
  CHECK(Polytope().empty());

  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto p2 = random_polytope(rng, 2, 10);
    CHECK(p2.volume() == doctest::Approx(oracle::hull_area(to2(p2.vertices()))).epsilon(1e-12));
    const auto p3 = random_polytope(rng, 3, 12);
    CHECK(p3.volume() == doctest::Approx(oracle::slab_volume(to3(p3.vertices()))).epsilon(1e-10));
  }
}

TEST_CASE("Minkowski sum, product, image and slices") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const auto a = random_polytope(rng, 2, 7);
    const auto b = random_polytope(rng, 2, 5);
    CHECK(minkowski_sum(a, b).volume() ==
          doctest::Approx(oracle::hull_sum_area(to2(a.vertices()), to2(b.vertices()))).epsilon(1e-12));
    const auto a3 = random_polytope(rng, 3, 7);
    const auto b3 = random_polytope(rng, 3, 5);
    std::vector<Eigen::Vector3d> sums;
    for (const auto& u : a3.vertices())
      for (const auto& v : b3.vertices()) sums.push_back(u + v);
    CHECK(minkowski_sum(a3, b3).volume() == doctest::Approx(oracle::slab_volume(sums)).epsilon(1e-10));
  }
  const auto rect = cartesian_product(Polytope::interval(0, 2), Polytope::interval(1, 4));
  CHECK(rect.volume() == doctest::Approx(6.0));
  const auto prism = cartesian_product(Polytope::from_planar(PlanarBody::regular_polygon(6)), Polytope::interval(0, 2));
  CHECK(prism.volume() == doctest::Approx(2 * area(PlanarBody::regular_polygon(6))));
  CHECK_THROWS_AS(cartesian_product(prism, Polytope::interval(0, 1)), std::invalid_argument);

  MatX m(2, 2);
  m << 2, 1, 0, 3;
  CHECK(linear_image(rect, m).volume() == doctest::Approx(36.0));
  MatX proj(1, 2);
  proj << 1, 1;
  const auto img = linear_image(rect, proj);
  CHECK(img.volume() == doctest::Approx(5.0));

  const auto cube = Polytope::box(VecX::Zero(3), VecX::Ones(3));
  const auto diag = slice(cube, Eigen::Vector3d(1, 1, 1), 1.5);
  CHECK(diag.affine_dim() == 2);
  CHECK(diag.vertices().size() == 6);
  CHECK(slice(cube, Eigen::Vector3d(0, 0, 1), 2.0).empty());
  const auto line = slice(slice(cube, Eigen::Vector3d(1, 0, 0), 0.3), Eigen::Vector3d(0, 1, 0), 0.6);
  CHECK(line.affine_dim() == 1);
  CHECK((line.vertices()[0] - line.vertices()[1]).norm() == doctest::Approx(1.0));
}

TEST_CASE("probe_family") {
  for (int d = 1; d <= 3; ++d) {
    const auto probes = probe_family(d, 7);
    CHECK(probes.size() == 20);
    for (const auto& p : probes) CHECK(p.dim() == d);
  }
  const auto a = probe_family(3, 7);
  const auto b = probe_family(3, 7);
  CHECK(a[10].volume() == b[10].volume());
}

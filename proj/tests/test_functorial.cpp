#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "valf/functorial.hpp"

using namespace valf;

namespace {

MatX random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  MatX m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

MeasureValuation random_measure(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.2, 1.5);
  auto phi = MeasureValuation::of_body(random_polytope(rng, dim, 5), u(rng));
  phi += MeasureValuation::of_body(random_polytope(rng, dim, 4), -u(rng));
  return phi;
}

std::vector<Vec2> to2(const std::vector<VecX>& v) {
  std::vector<Vec2> out;
  for (const auto& p : v) out.push_back({p(0), p(1)});
  return out;
}

NumericValuation euler_characteristic(int dim) {
  return {dim, [](const Polytope& k) { return k.empty() ? 0.0 : 1.0; }, 0};
}

}  // namespace

TEST_CASE("LinearMap") {
  std::mt19937_64 rng(1);
  for (int rows = 1; rows <= 3; ++rows)
    for (int cols = 1; cols <= 3; ++cols) {
      const LinearMap f(random_matrix(rng, rows, cols));
      CHECK(f.rank() == std::min(rows, cols));
      const auto [p, j] = f.factorization();
      CHECK(p.is_surjective());
      CHECK(j.is_injective());
      CHECK((j.matrix() * p.matrix() - f.matrix()).cwiseAbs().maxCoeff() < 1e-12);
      const auto [p2, j2] = f.factorization();
      CHECK(p2.matrix() == p.matrix());
      if (f.kernel_basis().cols() > 0) CHECK((f.matrix() * f.kernel_basis()).norm() < 1e-12);
    }
  const LinearMap r1 = LinearMap::from_rows(2, 2, {1, 2, 2, 4});
  CHECK(r1.rank() == 1);
  CHECK_FALSE(r1.is_surjective());
  CHECK_THROWS_AS(LinearMap::from_rows(2, 2, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("MeasureValuation and Valuation1") {
  const auto a = Polytope::interval(0.0, 2.0);
  const auto phi = MeasureValuation::of_body(a, 3.0);
  CHECK(phi(Polytope::interval(1.0, 1.5)) == doctest::Approx(7.5));
  CHECK(phi(Polytope()) == 0.0);
  const auto v = to_valuation1(phi);
  CHECK(v.c0 == doctest::Approx(6.0));
  CHECK(v.c1 == doctest::Approx(3.0));
  CHECK(to_valuation1(as_numeric(phi)).max_coeff_diff(v) < 1e-14);
  CHECK(MeasureValuation::volume(2)(Polytope::box(VecX::Zero(2), VecX::Ones(2))) == doctest::Approx(1.0));
  CHECK(fourier(fourier(v)).max_coeff_diff(v) == 0.0);
  const Valuation1 chi{1, 0}, vol{0, 1};
  CHECK(product(vol, vol).max_coeff_diff({}) == 0.0);
  CHECK(convolve(chi, chi).max_coeff_diff({}) == 0.0);
  CHECK(product(chi, v).max_coeff_diff(v) == 0.0);
  CHECK(convolve(vol, v).max_coeff_diff(v) == 0.0);
  CHECK_THROWS_AS(MeasureValuation(2, {{1.0, Polytope::interval(0, 1)}}), std::invalid_argument);

  SUBCASE("support-function term bodies evaluate exactly") {
    std::mt19937_64 rng(2);
    const auto body = random_smooth_body(rng);
    const auto psi = MeasureValuation::of_body(body);
    const auto k = random_polygon(rng);
    CHECK(psi(Polytope::from_planar(k)) ==
          doctest::Approx(oracle::polygon_plus_smooth_area(k.vertices(), [&](double t) { return body.support_at(t); }))
              .epsilon(1e-9));
  }
}

TEST_CASE("pullback") {
  std::mt19937_64 rng(3);
  const auto probes1 = probe_family(1, 11);
  const auto probes2 = probe_family(2, 11);
  SUBCASE("identity") {
    const auto phi = random_measure(rng, 2);
    CHECK(max_residual(pullback(LinearMap::identity(2), phi), as_numeric(phi), probes2) == 0.0);
  }
  SUBCASE("x-axis into the plane") {
    const auto a = random_polytope(rng, 2, 6);
    const auto phi = MeasureValuation::of_body(a);
    const auto i = LinearMap::from_rows(2, 1, {1, 0});
    const auto pulled = pullback(i, phi);
    for (const auto& k : probes1) {
      const double lo = k.vertices().front()(0);
      const double hi = k.vertices().back()(0);
      const double direct = oracle::hull_sum_area(to2(a.vertices()), {{lo, 0.0}, {hi, 0.0}});
      CHECK(pulled(k) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  SUBCASE("contravariant composition") {
    for (int t = 0; t < 10; ++t) {
      const LinearMap f1(random_matrix(rng, 3, 2));
      const LinearMap f2(random_matrix(rng, 2, 2));
      const auto phi = random_measure(rng, 3);
      const auto lhs = pullback(compose(f1, f2), phi);
      const auto rhs = pullback(f2, pullback(f1, phi));
      CHECK(max_residual(lhs, rhs, probes2) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(pullback(LinearMap::identity(3), MeasureValuation::volume(2)), std::invalid_argument);
}

TEST_CASE("pushforward along surjections") {
  std::mt19937_64 rng(4);
  const auto probes1 = probe_family(1, 12);
  const auto probes2 = probe_family(2, 12);
  SUBCASE("projection of vol(• + A) is vol(• + p(A))") {
    const auto a = random_polytope(rng, 2, 6);
    const auto p = LinearMap::from_rows(1, 2, {1, 0});
    const auto pushed = pushforward_symbolic(p, MeasureValuation::of_body(a));
    REQUIRE(pushed.terms().size() == 1);
    double lo = 1e300, hi = -1e300;
    for (const auto& v : a.vertices()) lo = std::min(lo, v(0)), hi = std::max(hi, v(0));
    CHECK(std::get<Polytope>(pushed.terms()[0].body).volume() == doctest::Approx(hi - lo).epsilon(1e-14));
  }
  SUBCASE("numeric construction agrees with the symbolic one") {
    const int shapes[][2] = {{2, 1}, {3, 2}, {3, 1}, {2, 2}, {3, 3}};
    for (const auto& s : shapes) {
      const LinearMap p(random_matrix(rng, s[1], s[0]));
      const auto phi = random_measure(rng, s[0]);
      const auto symbolic = as_numeric(pushforward_symbolic(p, phi));
      const auto numeric = pushforward_surjective(p, as_numeric(phi));
      CHECK(max_residual(symbolic, numeric, probe_family(s[1], 13)) <= 1e-8);
    }
  }
  SUBCASE("independent of the section") {
    const LinearMap p(random_matrix(rng, 1, 3));
    const auto phi = as_numeric(random_measure(rng, 3));
    PushforwardOptions other;
    other.section = p.pseudo_inverse() + p.kernel_basis() * random_matrix(rng, 2, 1);
    CHECK(max_residual(pushforward_surjective(p, phi), pushforward_surjective(p, phi, other), probes1) <= 1e-7);
    PushforwardOptions bad;
    bad.section = random_matrix(rng, 3, 1);
    CHECK_THROWS_AS(pushforward_surjective(p, phi, bad), std::invalid_argument);
  }
  SUBCASE("lowers the degree by the kernel dimension") {
    const LinearMap p(random_matrix(rng, 1, 2));
    const auto pushed = pushforward_surjective(p, as_numeric(MeasureValuation::volume(2)));
    for (const auto& k : probes1) CHECK(pushed(scale(k, 2.5)) == doctest::Approx(2.5 * pushed(k)).epsilon(1e-10));
    const auto chi_push = pushforward_surjective(p, euler_characteristic(2));
    for (const auto& k : probes1) CHECK(chi_push(k) == 0.0);
  }
  SUBCASE("non-polynomial input is rejected") {
    const NumericValuation bad{2, [](const Polytope& k) { return std::exp(k.volume()); }, 2};
    const auto pushed = pushforward_surjective(LinearMap::from_rows(1, 2, {1, 0}), bad);
    CHECK_THROWS_AS(pushed(Polytope::interval(0, 1)), std::runtime_error);
  }
  (void)probes2;
}

TEST_CASE("pushforward along injections") {
  const auto i = LinearMap::from_rows(2, 1, {1, 0});
  const auto square = Polytope::box(VecX::Zero(2), VecX::Ones(2));
  const auto vol_push = pushforward_injective(i, as_numeric(MeasureValuation::volume(1)));
  CHECK(vol_push(square) == doctest::Approx(1.0).epsilon(1e-14));
  const auto chi_push = pushforward_injective(i, euler_characteristic(1));
  CHECK(chi_push(square) == doctest::Approx(1.0).epsilon(1e-14));

  const auto probes = probe_family(2, 14);
  for (const auto& k : probes) {
    CHECK(vol_push(k) == doctest::Approx(k.volume()).epsilon(1e-12));
    double lo = 1e300, hi = -1e300;
    for (const auto& v : k.vertices()) lo = std::min(lo, v(1)), hi = std::max(hi, v(1));
    CHECK(std::abs(chi_push(k) - (hi - lo)) <= 1e-12);
  }
  SUBCASE("a line in space: χ gives the shadow area, length the volume") {
    const auto line = LinearMap::from_rows(3, 1, {0, 0, 1});
    const auto shadow = pushforward_injective(line, euler_characteristic(1));
    const auto len = pushforward_injective(line, as_numeric(MeasureValuation::volume(1)));
    for (const auto& k : probe_family(3, 15)) {
      std::vector<Vec2> xy;
      for (const auto& v : k.vertices()) xy.push_back({v(0), v(1)});
      const double shadow_area = xy.size() >= 3 ? oracle::hull_area(xy) : 0.0;
      CHECK(std::abs(shadow(k) - shadow_area) <= 1e-10);
      CHECK(std::abs(len(k) - k.volume()) <= 1e-10);
    }
  }
  SUBCASE("scaled embedding carries the Gram factor") {
    const auto j = LinearMap::from_rows(2, 1, {2, 0});
    const auto pushed = pushforward_injective(j, as_numeric(MeasureValuation::volume(1)));
    // vol₁ on R¹ is half the length measure on the image line.
    CHECK(pushed(square) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("covariant functoriality over random chains") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(1, 3);
  for (int t = 0; t < 12; ++t) {
    const int a = d(rng), b = d(rng), c = d(rng);
    const LinearMap f2(random_matrix(rng, b, a));
    const LinearMap f1(random_matrix(rng, c, b));
    const auto phi = random_measure(rng, a);
    const auto direct = pushforward(compose(f1, f2), phi);
    const auto chained = pushforward(f1, pushforward(f2, phi));
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(c);
    CHECK(max_residual(direct, chained, probe_family(c, 16, 8)) <= 1e-8);
  }
}

TEST_CASE("factorization independence") {
  std::mt19937_64 rng(6);
  const LinearMap f(random_matrix(rng, 2, 1) * random_matrix(rng, 1, 2));
  REQUIRE(f.rank() == 1);
  const auto [p, j] = f.factorization();
  const double t = 0.7;
  const LinearMap p2(t * p.matrix());
  const LinearMap j2(j.matrix() / t);
  const auto phi = as_numeric(random_measure(rng, 2));
  CHECK(max_residual(pushforward_factored(p, j, phi), pushforward_factored(p2, j2, phi), probe_family(2, 17)) <= 1e-8);
}

TEST_CASE("exterior products and the diagonal") {
  const auto a = MeasureValuation::of_body(Polytope::interval(0, 1));
  const auto b = MeasureValuation::of_body(Polytope::interval(0, 2));
  const auto ab = exterior_product(a, b);
  CHECK(ab.dim() == 2);
  CHECK(ab(Polytope::point(VecX::Zero(2))) == doctest::Approx(2.0));
  const auto via_diag = product_via_diagonal(a, b);
  CHECK(via_diag(Polytope::interval(0, 3)) == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(via_diag(Polytope::interval(4, 4)) == doctest::Approx(2.0).epsilon(1e-14));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int t = 0; t < 20; ++t) {
    const double la = u(rng), lb = u(rng), lk = u(rng);
    const auto pa = MeasureValuation::of_body(Polytope::interval(-0.3, la - 0.3));
    const auto pb = MeasureValuation::of_body(Polytope::interval(1.0, 1.0 + lb));
    const auto k = Polytope::interval(0.5, 0.5 + lk);
    // The zonotope spanned by (1,1)·lk, (la,0) and (0,lb).
    std::vector<Vec2> gens{{0, 0}};
    for (Vec2 g : {Vec2{lk, lk}, Vec2{la, 0}, Vec2{0, lb}}) {
      const auto n = gens.size();
      for (std::size_t i = 0; i < n; ++i) gens.push_back(gens[i] + g);
    }
    const double zonotope = oracle::hull_area(gens);
    CHECK(std::abs(product_via_diagonal(pa, pb)(k) - zonotope) <= 1e-9);
    const Valuation1 graded = product(to_valuation1(pa), to_valuation1(pb));
    CHECK(std::abs(graded(k) - zonotope) <= 1e-9);
    const Valuation1 conv = convolve(to_valuation1(pa), to_valuation1(pb));
    CHECK(to_valuation1(convolution_via_addition_numeric(pa, pb)).max_coeff_diff(conv) <= 1e-10);
    CHECK(to_valuation1(convolution_via_addition(pa, pb)).max_coeff_diff(conv) <= 1e-12);
  }
  SUBCASE("cylinder extension and bilinearity") {
    const auto chi_like = MeasureValuation::of_body(Polytope::point(VecX::Zero(1)), 2.0);
    const auto poly = MeasureValuation::of_body(random_polytope(rng, 2, 5));
    const auto cyl = exterior_product(poly, chi_like);
    const auto k = random_polytope(rng, 3, 8);
    // (φ ⊠ 2vol₁)(K) = 2∫ φ(K ∩ {z = t}) dt.
    const auto fiber = pushforward_injective(LinearMap::from_rows(3, 2, {1, 0, 0, 1, 0, 0}), as_numeric(poly));
    CHECK(cyl(k) == doctest::Approx(2.0 * fiber(k)).epsilon(1e-10));
    const auto sum = exterior_product(a + b, b);
    const auto split = exterior_product(a, b) + exterior_product(b, b);
    CHECK(sum(Polytope::box(VecX::Zero(2), VecX::Ones(2))) ==
          doctest::Approx(split(Polytope::box(VecX::Zero(2), VecX::Ones(2)))));
  }
  CHECK_THROWS_AS(exterior_product(MeasureValuation::volume(2), MeasureValuation::volume(2)), std::invalid_argument);
}

TEST_CASE("addition map in the plane matches the 2D convolution") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_smooth_body(rng);
    const auto b = random_smooth_body(rng);
    const auto conv = convolution_via_addition(MeasureValuation::of_body(a), MeasureValuation::of_body(b));
    const auto sum_body = std::get<PlanarBody>(conv.terms()[0].body);
    CHECK(from_body_measure(sum_body).max_coeff_diff(convolve(from_body_measure(a), from_body_measure(b))) <= 1e-10);
  }
}

TEST_CASE("pushforward is a convolution homomorphism") {
  std::mt19937_64 rng(9);
  const auto probes = probe_family(1, 18);
  for (int t = 0; t < 10; ++t) {
    const LinearMap p(random_matrix(rng, 1, 2));
    const auto phi = random_measure(rng, 2);
    const auto psi = random_measure(rng, 2);
    CHECK(pushforward_convolution_residual(p, phi, psi, probes) <= 1e-12);
    const auto numeric = pushforward_surjective(p, as_numeric(convolve(phi, psi)));
    const auto symbolic = as_numeric(convolve(pushforward_symbolic(p, phi), pushforward_symbolic(p, psi)));
    CHECK(max_residual(numeric, symbolic, probes) <= 1e-8);
  }
  const LinearMap p(random_matrix(rng, 1, 2));
  const auto unit = pushforward_symbolic(p, MeasureValuation::volume(2));
  CHECK(max_residual(as_numeric(unit), as_numeric(MeasureValuation::volume(1)), probes) <= 1e-14);
}

TEST_CASE("base change") {
  std::mt19937_64 rng(10);
  SUBCASE("identity square") {
    const auto id = LinearMap::identity(2);
    const auto sq = fiber_square(id, id);
    CHECK(commutativity_defect(sq) < 1e-12);
    const auto phi = as_numeric(random_measure(rng, 2));
    CHECK(base_change_residual(sq, phi, probe_family(2, 19, 8)) <= 1e-10);
  }
  SUBCASE("product with a line") {
    for (int t = 0; t < 4; ++t) {
      const LinearMap f(random_matrix(rng, 1, 2));
      // g: Y ⊕ L → Y drops the line.
      const auto g = LinearMap::from_rows(1, 2, {1, 0});
      const auto sq = fiber_square(f, g);
      CHECK(sq.f_tilde.cols() == 3);
      CHECK(commutativity_defect(sq) < 1e-12);
      const auto phi = as_numeric(random_measure(rng, 2));
      CHECK(base_change_residual(sq, phi, probe_family(2, 20, 8)) <= 1e-8);
    }
  }
  SUBCASE("injective g") {
    for (int t = 0; t < 4; ++t) {
      const LinearMap f(random_matrix(rng, 2, 2));
      const LinearMap g(random_matrix(rng, 2, 1));
      const auto sq = fiber_square(f, g);
      const auto phi = as_numeric(random_measure(rng, 2));
      CHECK(base_change_residual(sq, phi, probe_family(1, 21, 8)) <= 1e-7);
      const auto psi = as_numeric(random_measure(rng, 1));
      CHECK(base_change2_residual(sq, psi, probe_family(2, 22, 8)) <= 1e-7);
    }
  }
  SUBCASE("the density factor is needed") {
    const LinearMap f(random_matrix(rng, 1, 2));
    const LinearMap g(random_matrix(rng, 1, 1));
    auto sq = fiber_square(f, g);
    CHECK(sq.density_factor != doctest::Approx(1.0));
    const auto phi = as_numeric(random_measure(rng, 2));
    const auto probes = probe_family(1, 23, 8);
    CHECK(base_change_residual(sq, phi, probes) <= 1e-8);
    sq.density_factor = 1.0;
    CHECK(base_change_residual(sq, phi, probes) > 1e-3);
  }
  CHECK_THROWS_AS(fiber_square(LinearMap::from_rows(2, 1, {1, 0}), LinearMap::from_rows(2, 1, {2, 0})),
                  std::invalid_argument);
}

TEST_CASE("projection-derivative identity") {
  std::mt19937_64 rng(11);
  SUBCASE("vertical unit segment over the x-axis") {
    for (int t = 0; t < 10; ++t) {
      const auto a = random_polytope(rng, 2, 7);
      const auto b = Polytope(2, {VecX::Zero(2), Eigen::Vector2d(0, 1)});
      const auto p = LinearMap::from_rows(1, 2, {1, 0});
      std::vector<double> eps{0, 0.5, 1.0}, vals;
      for (double e : eps) vals.push_back(oracle::hull_sum_area(to2(a.vertices()), {{0, 0}, {0, e}}));
      const double slope = oracle::poly_fit(eps, vals, 2)[1];
      CHECK(std::abs(steiner_top_coefficient(a, b) - slope) <= 1e-8);
      CHECK(std::abs(kernel_volume_product(p, a, b) - slope) <= 1e-8);
    }
  }
  SUBCASE("general surjections") {
    for (int t = 0; t < 10; ++t) {
      const int n = 2 + t % 2;
      const LinearMap p(random_matrix(rng, n - 1, n));
      const auto a = random_polytope(rng, n, 8);
      const VecX dir = p.kernel_basis().col(0);
      const auto b = Polytope(n, {VecX::Zero(n), (0.5 + 0.1 * t) * dir});
      CHECK(std::abs(steiner_top_coefficient(a, b) - kernel_volume_product(p, a, b)) <= 1e-8);
    }
  }
}

TEST_CASE("Fourier intertwines pullback and pushforward on a line in the plane") {
  std::mt19937_64 rng(12);
  const auto i = LinearMap::from_rows(2, 1, {1, 0});
  const auto dual = LinearMap::from_rows(1, 2, {1, 0});
  const auto probes = probe_family(1, 24);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_smooth_body(rng);
    const auto phi = from_body_measure(a);
    const Valuation1 lhs = fourier(to_valuation1(pullback(i, as_numeric(phi))));
    const auto rhs = pushforward_surjective(dual, as_numeric(fourier(phi)));
    double r = 0.0;
    for (const auto& k : probes) r = std::max(r, std::abs(lhs(k) - rhs(k)));
    CHECK(r <= 1e-7);
    // χ-coefficient: the width of A in the y direction.
    CHECK(lhs.c0 == doctest::Approx(a.support_at(kPi / 2) + a.support_at(3 * kPi / 2)).epsilon(1e-12));
  }
}

#include "valf/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>
#include <type_traits>

#include "valf/numerics.hpp"

namespace valf {

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  double residual = 0.0;
  int instances = 0;
  std::map<std::string, double> values;
};

struct CaseDef {
  std::string id;
  std::string anchor;
  double tolerance;
  std::function<Outcome(std::mt19937_64&)> run;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// ---------------------------------------------------------------------------
// planar algebra

std::vector<CaseDef> algebra2d_cases(const VerifyConfig& cfg) {
  const int n = cfg.band_limit;
  std::vector<CaseDef> cs;
  cs.push_back({"homomorphism", "F(phi.psi) = F(phi) * F(psi), odd-odd degree-1 pairing with orientation sign", 1e-10,
                [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 200; ++o.instances) {
                    const auto x = random_valuation(rng, n), y = random_valuation(rng, n);
                    o.residual = std::max(o.residual,
                                          fourier(product(x, y)).max_coeff_diff(convolve_oriented(fourier(x), fourier(y))));
                  }
                  return o;
                }});
  cs.push_back({"homomorphism_even", "F(phi.psi) = F(phi) * F(psi) for even phi, psi", 1e-10, [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 200; ++o.instances) {
                    const auto x = random_valuation(rng, n).parity_part(0);
                    const auto y = random_valuation(rng, n).parity_part(0);
                    o.residual = std::max(o.residual, fourier(product(x, y)).max_coeff_diff(convolve(fourier(x), fourier(y))));
                  }
                  return o;
                }});
  cs.push_back({"convolution_of_bodies", "vol(.+A) * vol(.+B) = vol(.+A+B)", 1e-10, [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 100; ++o.instances) {
                    const auto a = random_smooth_body(rng, n), b = random_smooth_body(rng, n);
                    const auto lhs = convolve(from_body_measure(a), from_body_measure(b));
                    o.residual = std::max(o.residual, lhs.max_coeff_diff(from_body_measure(minkowski_sum(a, b))));
                  }
                  return o;
                }});
  cs.push_back({"product_of_mixed_volumes", "V(.,A).V(.,B) = 1/2 V(A,-B) vol, mixed volume by Steiner fit (relative)", 1e-8,
                [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 100; ++o.instances) {
                    const auto a = random_smooth_body(rng, n), b = random_smooth_body(rng, n);
                    const auto p = product(mixed_valuation(a), mixed_valuation(b));
                    // area(A + ε(−B)) = area A + 2εV(A,−B) + ε² area B
                    std::vector<double> eps, vals;
                    for (int i = 0; i < 4; ++i) {
                      const double e = 0.25 * (i + 1);
                      eps.push_back(e);
                      vals.push_back(area(minkowski_sum(a, transform_body(b, {-e, 0, 0, -e}))));
                    }
                    const double half_mv = 0.25 * polyfit(eps, vals, 2).coeffs(1);
                    double r = std::abs(p.c2() - half_mv) / std::abs(half_mv);
                    r = std::max(r, p.degree_part(0).max_coeff_diff(Valuation2()));
                    r = std::max(r, p.degree_part(1).max_coeff_diff(Valuation2()));
                    o.residual = std::max(o.residual, r);
                  }
                  return o;
                }});
  cs.push_back({"units", "chi.phi = phi and vol * phi = phi", cfg.tol_exact, [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 100; ++o.instances) {
                    const auto x = random_valuation(rng, n);
                    o.residual = std::max(o.residual, product(Valuation2::euler_char(), x).max_coeff_diff(x));
                    o.residual = std::max(o.residual, convolve(Valuation2::volume(), x).max_coeff_diff(x));
                  }
                  return o;
                }});
  cs.push_back({"commutative_associative", "product and convolution are commutative and associative", 1e-10,
                [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 50; ++o.instances) {
                    const auto x = random_valuation(rng, n), y = random_valuation(rng, n), z = random_valuation(rng, n);
                    o.residual = std::max({o.residual, product(x, y).max_coeff_diff(product(y, x)),
                                           convolve(x, y).max_coeff_diff(convolve(y, x)),
                                           product(product(x, y), z).max_coeff_diff(product(x, product(y, z))),
                                           convolve(convolve(x, y), z).max_coeff_diff(convolve(x, convolve(y, z)))});
                  }
                  return o;
                }});
  return cs;
}

std::vector<CaseDef> fourier2d_cases(const VerifyConfig& cfg) {
  const int n = cfg.band_limit;
  const double tol = cfg.tol_exact;
  std::vector<CaseDef> cs;
  cs.push_back({"F2_is_euler", "F^2 = E on coefficients", tol, [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 200; ++o.instances) {
                    const auto x = random_valuation(rng, n);
                    o.residual = std::max(o.residual, fourier(fourier(x)).max_coeff_diff(euler(x)));
                  }
                  return o;
                }});
  cs.push_back({"F4_is_identity", "F^4 = Id on coefficients", tol, [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 200; ++o.instances) {
                    const auto x = random_valuation(rng, n);
                    o.residual = std::max(o.residual, fourier(fourier(fourier(fourier(x)))).max_coeff_diff(x));
                  }
                  return o;
                }});
  cs.push_back({"F2_not_identity_witness", "F^2 != Id: F^2 flips sin 3t, so |F^2 w - w| = 2", tol, [](std::mt19937_64&) {
                  const auto w = Valuation2::degree1(TrigPoly::sin_term(3));
                  Outcome o;
                  o.instances = 1;
                  o.values["gap"] = fourier(fourier(w)).max_coeff_diff(w);
                  o.residual = std::abs(o.values["gap"] - 2.0);
                  return o;
                }});
  cs.push_back({"odd_fourier_rotation", "F V(.,A) = V(.,J^-1 A), J the quarter turn", tol, [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 100; ++o.instances) {
                    const auto a = random_smooth_body(rng, n);
                    const auto jinv_a = transform_body(a, rotation(-kPi / 2));
                    o.residual = std::max(o.residual, fourier(mixed_valuation(a)).max_coeff_diff(mixed_valuation(jinv_a)));
                  }
                  return o;
                }});
  cs.push_back({"fourier_equivariance", "F commutes with the rotation action", tol, [n](std::mt19937_64& rng) {
                  Outcome o;
                  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
                  for (; o.instances < 100; ++o.instances) {
                    const auto x = random_valuation(rng, n);
                    const double al = angle(rng);
                    o.residual = std::max(o.residual,
                                          fourier(rotate_action(x, al)).max_coeff_diff(rotate_action(fourier(x), al)));
                  }
                  return o;
                }});
  cs.push_back({"fourier_of_chi", "F chi = vol, F vol = chi, F V1 = V1", tol, [](std::mt19937_64&) {
                  Outcome o;
                  o.instances = 3;
                  o.residual = std::max({fourier(Valuation2::euler_char()).max_coeff_diff(Valuation2::volume()),
                                         fourier(Valuation2::volume()).max_coeff_diff(Valuation2::euler_char()),
                                         fourier(Valuation2::intrinsic1()).max_coeff_diff(Valuation2::intrinsic1())});
                  return o;
                }});
  return cs;
}

// ---------------------------------------------------------------------------
// functorial calculus

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

double relative_residual(const NumericValuation& a, const NumericValuation& b, const std::vector<Polytope>& probes) {
  double r = 0.0;
  for (const auto& k : probes) r = std::max(r, rel(a(k), b(k)));
  return r;
}

std::vector<CaseDef> functorial_cases(const VerifyConfig& cfg) {
  const double tol_exact = cfg.tol_exact;
  const unsigned seed = cfg.seed;
  const int n = cfg.band_limit;
  std::vector<CaseDef> cs;
  cs.push_back({"pushforward_chain", "(f g)_* = f_* g_* over random maps among R^1..R^3 (fiber quadrature)", cfg.tol_quad,
                [seed](std::mt19937_64& rng) {
                  Outcome o;
                  std::uniform_int_distribution<int> d(1, 3);
                  for (; o.instances < 50; ++o.instances) {
                    const int a = d(rng), b = d(rng), c = d(rng);
                    const LinearMap f2(random_matrix(rng, b, a)), f1(random_matrix(rng, c, b));
                    const auto phi = random_measure(rng, a);
                    const auto direct = pushforward(compose(f1, f2), phi);
                    const auto chained = pushforward(f1, pushforward(f2, phi));
                    o.residual = std::max(o.residual, max_residual(direct, chained, probe_family(c, seed + o.instances, 6)));
                  }
                  return o;
                }});
  cs.push_back({"pushforward_chain_symbolic", "(f g)_* = f_* g_* on vol(.+A) along surjections (relative)", tol_exact,
                [seed](std::mt19937_64& rng) {
                  Outcome o;
                  std::uniform_int_distribution<int> d(1, 3);
                  for (; o.instances < 50; ++o.instances) {
                    int dims[3] = {d(rng), d(rng), d(rng)};
                    std::sort(dims, dims + 3, std::greater<>());
                    const LinearMap f2(random_matrix(rng, dims[1], dims[0])), f1(random_matrix(rng, dims[2], dims[1]));
                    const auto phi = random_measure(rng, dims[0]);
                    const auto direct = as_numeric(pushforward_symbolic(compose(f1, f2), phi));
                    const auto chained = as_numeric(pushforward_symbolic(f1, pushforward_symbolic(f2, phi)));
                    o.residual =
                        std::max(o.residual, relative_residual(direct, chained, probe_family(dims[2], seed + o.instances, 6)));
                  }
                  return o;
                }});
  cs.push_back({"pullback_chain", "(f g)^* = g^* f^* over random maps among R^1..R^3 (relative)", tol_exact,
                [seed](std::mt19937_64& rng) {
                  Outcome o;
                  std::uniform_int_distribution<int> d(1, 3);
                  for (; o.instances < 50; ++o.instances) {
                    const int a = d(rng), b = d(rng), c = d(rng);
                    const LinearMap f2(random_matrix(rng, b, a)), f1(random_matrix(rng, c, b));
                    const auto phi = random_measure(rng, c);
                    const auto direct = pullback(compose(f1, f2), phi);
                    const auto chained = pullback(f2, pullback(f1, phi));
                    o.residual = std::max(o.residual, relative_residual(direct, chained, probe_family(a, seed + o.instances, 6)));
                  }
                  return o;
                }});
  cs.push_back({"diagonal_product_1d", "Delta^*(phi x psi) = phi.psi in dimension 1, zonotope area formula", 1e-9,
                [](std::mt19937_64& rng) {
                  Outcome o;
                  std::uniform_real_distribution<double> u(0.1, 2.0);
                  for (; o.instances < 30; ++o.instances) {
                    const double la = u(rng), lb = u(rng), lk = u(rng);
                    const auto pa = MeasureValuation::of_body(Polytope::interval(-0.3, la - 0.3));
                    const auto pb = MeasureValuation::of_body(Polytope::interval(1.0, 1.0 + lb));
                    const auto k = Polytope::interval(0.5, 0.5 + lk);
                    // zonotope spanned by (lk, lk), (la, 0), (0, lb)
                    const double zonotope = lk * la + lk * lb + la * lb;
                    const Valuation1 graded = product(to_valuation1(pa), to_valuation1(pb));
                    o.residual = std::max({o.residual, std::abs(product_via_diagonal(pa, pb)(k) - zonotope),
                                           std::abs(graded(k) - zonotope)});
                  }
                  return o;
                }});
  cs.push_back({"addition_convolution_1d", "a_*(phi x psi) = phi * psi in dimension 1", 1e-9, [](std::mt19937_64& rng) {
                  Outcome o;
                  std::uniform_real_distribution<double> u(0.1, 2.0);
                  for (; o.instances < 30; ++o.instances) {
                    const auto pa = MeasureValuation::of_body(Polytope::interval(0.2, 0.2 + u(rng)), u(rng));
                    const auto pb = MeasureValuation::of_body(Polytope::interval(-1.0, -1.0 + u(rng)), u(rng));
                    const Valuation1 conv = convolve(to_valuation1(pa), to_valuation1(pb));
                    o.residual = std::max({o.residual, to_valuation1(convolution_via_addition_numeric(pa, pb)).max_coeff_diff(conv),
                                           to_valuation1(convolution_via_addition(pa, pb)).max_coeff_diff(conv)});
                  }
                  return o;
                }});
  cs.push_back({"addition_convolution_2d", "a_*(vol(.+A) x vol(.+B)) = vol(.+A) * vol(.+B) in the plane", 1e-10,
                [n](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 30; ++o.instances) {
                    const auto a = random_smooth_body(rng, n), b = random_smooth_body(rng, n);
                    const auto conv = convolution_via_addition(MeasureValuation::of_body(a), MeasureValuation::of_body(b));
                    const auto sum_body = std::get<PlanarBody>(conv.terms()[0].body);
                    o.residual = std::max(
                        o.residual, from_body_measure(sum_body).max_coeff_diff(convolve(from_body_measure(a), from_body_measure(b))));
                  }
                  return o;
                }});
  cs.push_back({"fourier_pullback_intertwining", "F_L(i^* phi) = (i^dual)_*(F_V phi) for the x-axis in the plane", 1e-7,
                [seed, n](std::mt19937_64& rng) {
                  Outcome o;
                  const auto i = LinearMap::from_rows(2, 1, {1, 0});
                  const auto dual = LinearMap::from_rows(1, 2, {1, 0});
                  const auto probes = probe_family(1, seed);
                  for (; o.instances < 50; ++o.instances) {
                    const auto phi = from_body_measure(random_smooth_body(rng, n));
                    const Valuation1 lhs = fourier(to_valuation1(pullback(i, as_numeric(phi))));
                    const auto rhs = pushforward_surjective(dual, as_numeric(fourier(phi)));
                    for (const auto& k : probes) o.residual = std::max(o.residual, std::abs(lhs(k) - rhs(k)));
                  }
                  return o;
                }});
  cs.push_back({"projection_derivative", "d/de vol(A + eB) = vol_k(B) vol(p(A)) for B in ker p, R2->R1 and R3->R2", 1e-8,
                [](std::mt19937_64& rng) {
                  Outcome o;
                  std::uniform_real_distribution<double> len(0.3, 1.5);
                  for (; o.instances < 30; ++o.instances) {
                    const int dim = 2 + o.instances % 2;
                    const LinearMap p(random_matrix(rng, dim - 1, dim));
                    const auto a = random_polytope(rng, dim, 8);
                    const VecX dir = p.kernel_basis().col(0);
                    const auto b = Polytope(dim, {VecX::Zero(dim), len(rng) * dir});
                    o.residual = std::max(o.residual, std::abs(steiner_top_coefficient(a, b) - kernel_volume_product(p, a, b)));
                  }
                  return o;
                }});
  return cs;
}

std::vector<CaseDef> basechange_cases(const VerifyConfig& cfg) {
  const unsigned seed = cfg.seed;
  std::vector<CaseDef> cs;
  cs.push_back({"generic_squares", "g^* f_* = J f~_* g~^* on squares R2->R1<-R1", 1e-7, [seed](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 10; ++o.instances) {
                    const auto sq = fiber_square(LinearMap(random_matrix(rng, 1, 2)), LinearMap(random_matrix(rng, 1, 1)));
                    const auto phi = as_numeric(random_measure(rng, 2));
                    o.residual = std::max({o.residual, commutativity_defect(sq),
                                           base_change_residual(sq, phi, probe_family(1, seed + o.instances, 8))});
                  }
                  return o;
                }});
  cs.push_back({"product_with_line", "base change against the projection Y+L -> Y", 1e-7, [seed](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 10; ++o.instances) {
                    const auto sq = fiber_square(LinearMap(random_matrix(rng, 1, 2)), LinearMap::from_rows(1, 2, {1, 0}));
                    const auto phi = as_numeric(random_measure(rng, 2));
                    o.residual = std::max({o.residual, commutativity_defect(sq),
                                           base_change_residual(sq, phi, probe_family(2, seed + o.instances, 8))});
                  }
                  return o;
                }});
  cs.push_back({"injective_g", "g^* f_* = J f~_* g~^* and f^* g_* = J g~_* f~^* for injective g", 1e-7,
                [seed](std::mt19937_64& rng) {
                  Outcome o;
                  for (; o.instances < 10; ++o.instances) {
                    const auto sq = fiber_square(LinearMap(random_matrix(rng, 2, 2)), LinearMap(random_matrix(rng, 2, 1)));
                    const auto phi = as_numeric(random_measure(rng, 2));
                    const auto psi = as_numeric(random_measure(rng, 1));
                    o.residual = std::max({o.residual, commutativity_defect(sq),
                                           base_change_residual(sq, phi, probe_family(1, seed + o.instances, 8)),
                                           base_change2_residual(sq, psi, probe_family(2, seed + o.instances, 8))});
                  }
                  return o;
                }});
  return cs;
}

// ---------------------------------------------------------------------------
// even valuations in R³

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  Eigen::Matrix3d q = MatX(random_matrix(rng, 3, 3)).householderQr().householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

Body3 ellipsoid_polytope() {
  SphereGrid g(3);
  std::vector<Vec3> pts;
  for (const auto& v : g.vertices()) pts.push_back(Vec3(v.x(), 0.8 * v.y(), 0.6 * v.z()));
  return Body3::from_points(pts);
}

double projection_area(const Body3& a, const Vec3& u) {
  const auto [e1, e2] = plane_basis(u);
  std::vector<Vec2> pts;
  for (const auto& v : a.poly.vertices()) pts.push_back({Vec3(v).dot(e1), Vec3(v).dot(e2)});
  return area(PlanarBody::hull(pts));
}

std::vector<Body3> probes3(std::mt19937_64& rng) {
  std::vector<Body3> out = {Body3::cube(), Body3::ball(0.7, Vec3(0.1, 0.2, 0.3)),
                            Body3::square(Vec3(1, 0, 0), Vec3(0, 0.6, 0.8)), Body3::segment(Vec3(0.3, -0.5, 0.9))};
  for (int i = 0; i < 4; ++i) out.push_back(Body3::from_polytope(random_polytope(rng, 3, 7)));
  Body3 rounded = Body3::from_polytope(random_polytope(rng, 3, 6));
  rounded.radius = 0.3;
  out.push_back(rounded);
  return out;
}

std::vector<CaseDef> even3d_cases(const VerifyConfig& cfg) {
  std::vector<CaseDef> cs;
  cs.push_back({"fourier_even_involution", "F o F = Id on Klain functions, samplewise", cfg.tol_exact,
                [](std::mt19937_64&) {
                  const auto k = klain_function(EvenValuation3::brightness(ellipsoid_polytope()), 1);
                  const auto kk = fourier_even(fourier_even(k));
                  Outcome o;
                  o.instances = static_cast<int>(k.values.size());
                  o.residual = kk.gr == k.gr ? 0.0 : 1.0;
                  for (std::size_t i = 0; i < k.values.size(); ++i)
                    o.residual = std::max(o.residual, std::abs(kk.values[i] - k.values[i]));
                  return o;
                }});
  cs.push_back({"klain_restriction", "Kl(i^* phi) = Kl(phi) restricted to lines of a plane, brightness phi", 1e-3,
                [](std::mt19937_64& rng) {
                  const auto phi = EvenValuation3::brightness(ellipsoid_polytope());
                  const auto kl = klain_function(phi, 1);
                  Outcome o;
                  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
                  for (; o.instances < 50; ++o.instances) {
                    const Eigen::Matrix3d q = random_rotation(rng);
                    const MatX inc = q.leftCols<2>();
                    const double th = angle(rng);
                    const Eigen::Vector2d w(std::cos(th), std::sin(th));
                    const Body3 image{linear_image(Polytope(2, {VecX::Zero(2), VecX(w)}), inc), 0.0};
                    o.residual = std::max(o.residual, std::abs(phi(image) - kl.at(inc * w)));
                  }
                  return o;
                }});
  cs.push_back({"so3_equivariance", "Kl(g phi)(u) = Kl(phi)(g^-1 u), black box from a rotated brightness body", 1e-3,
                [](std::mt19937_64& rng) {
                  const auto phi = EvenValuation3::brightness(ellipsoid_polytope());
                  const auto kl = klain_function(phi, 1);
                  Outcome o;
                  for (; o.instances < 50; ++o.instances) {
                    const Eigen::Matrix3d g = random_rotation(rng);
                    const Eigen::Matrix3d g_inv = g.transpose();
                    const auto rotated = EvenValuation3::black_box(
                        [phi, g_inv](const Body3& k) { return phi(transform(k, g_inv)); }, 1);
                    const Vec3 u = random_direction(rng);
                    o.residual = std::max(o.residual, std::abs(rotated(Body3::segment(u)) - kl.at(g.transpose() * u)));
                  }
                  return o;
                }});
  cs.push_back({"brightness_klain", "Kl of V(.,A,A) at u is area(A|u-perp)/3: exact at grid points, interpolated elsewhere",
                1e-3, [](std::mt19937_64& rng) {
                  const Body3 a = ellipsoid_polytope();
                  const auto phi = EvenValuation3::brightness(a);
                  const auto kl = klain_function(phi, 1);
                  const auto& grid = SphereGrid::ico4();
                  Outcome o;
                  double exact = 0.0;
                  for (int i = 0; i < static_cast<int>(grid.size()); i += 51)
                    exact = std::max(exact, std::abs(kl.values[i] - projection_area(a, grid.vertices()[i]) / 3.0));
                  for (; o.instances < 50; ++o.instances) {
                    const Vec3 u = random_direction(rng);
                    o.residual = std::max(o.residual, std::abs(kl.at(u) - projection_area(a, u) / 3.0));
                  }
                  o.values["grid_point_residual"] = exact;
                  o.residual = std::max(o.residual, exact);
                  return o;
                }});
  cs.push_back({"intrinsic_klain", "Kl(V1) = 1 on lines, Kl(V2) = 1 on planes, F Kl(V1) = Kl(V2)", 1e-10,
                [](std::mt19937_64&) {
                  const auto k1 = klain_function(EvenValuation3::intrinsic(1), 1);
                  const auto k2 = klain_function(EvenValuation3::intrinsic(2), 2);
                  const auto f1 = fourier_even(k1);
                  Outcome o;
                  o.instances = static_cast<int>(k1.values.size());
                  for (std::size_t i = 0; i < k1.values.size(); ++i)
                    o.residual = std::max({o.residual, std::abs(k1.values[i] - 1.0), std::abs(k2.values[i] - 1.0),
                                           std::abs(f1.values[i] - k2.values[i])});
                  o.residual = std::max(o.residual, f1.gr == 2 ? 0.0 : 1.0);
                  return o;
                }});
  cs.push_back({"plane_square_choice", "Gr2 Klain value does not depend on the unit square chosen in the plane", 1e-6,
                [](std::mt19937_64& rng) {
                  const auto phi = EvenValuation3::mixed_quadratic(Body3::from_polytope(random_polytope(rng, 3, 7)));
                  Outcome o;
                  for (; o.instances < 20; ++o.instances) {
                    const auto [e1, e2] = plane_basis(random_direction(rng));
                    double lo = 1e300, hi = -1e300;
                    for (double al : {0.0, 0.7, 2.1}) {
                      const Vec3 f1 = std::cos(al) * e1 + std::sin(al) * e2, f2 = -std::sin(al) * e1 + std::cos(al) * e2;
                      const double v = phi(Body3::square(f1, f2));
                      lo = std::min(lo, v);
                      hi = std::max(hi, v);
                    }
                    o.residual = std::max(o.residual, hi - lo);
                  }
                  return o;
                }});
  cs.push_back({"fourier_of_brightness", "F Kl(V(.,Z,Z)) = Kl(V(.,.,W)) for a zonotope Z and W = sum of s_i x s_j", 1e-10,
                [](std::mt19937_64& rng) {
                  std::vector<Vec3> gens;
                  for (int i = 0; i < 4; ++i) gens.push_back(random_direction(rng) * (0.5 + 0.2 * i));
                  auto zonotope = [](const std::vector<Vec3>& g) {
                    Body3 z = Body3::from_points({Vec3::Zero()});
                    for (const auto& s : g) z = z + Body3::segment(s);
                    return z;
                  };
                  std::vector<Vec3> crosses;
                  for (std::size_t i = 0; i < gens.size(); ++i)
                    for (std::size_t j = i + 1; j < gens.size(); ++j) crosses.push_back(gens[i].cross(gens[j]));
                  const auto lhs = fourier_even(klain_function(EvenValuation3::brightness(zonotope(gens)), 1));
                  const auto rhs = klain_function(EvenValuation3::mixed_quadratic(zonotope(crosses)), 2);
                  Outcome o;
                  o.instances = static_cast<int>(lhs.values.size());
                  for (std::size_t i = 0; i < lhs.values.size(); ++i)
                    o.residual = std::max(o.residual, std::abs(lhs.values[i] - rhs.values[i]));
                  return o;
                }});
  cs.push_back({"intrinsic_volumes_ball", "V_k(rB) from the Steiner cubic kappa3 (r+e)^3", 1e-8, [](std::mt19937_64& rng) {
                  std::uniform_real_distribution<double> u(0.2, 3.0);
                  Outcome o;
                  for (; o.instances < 10; ++o.instances) {
                    const double r = u(rng);
                    const Body3 b = Body3::ball(r, Vec3(u(rng), -u(rng), u(rng)));
                    o.residual = std::max({o.residual, std::abs(intrinsic_volume(3, b) - 4.0 * kPi / 3.0 * r * r * r),
                                           std::abs(intrinsic_volume(2, b) - 2.0 * kPi * r * r),
                                           std::abs(intrinsic_volume(1, b) - 4.0 * r)});
                  }
                  return o;
                }});
  cs.push_back({"evenness", "phi(-K) = phi(K) on probe bodies", 1e-7, [](std::mt19937_64& rng) {
                  const auto a = Body3::from_polytope(random_polytope(rng, 3, 7));
                  const EvenValuation3 vals[] = {EvenValuation3::brightness(a), EvenValuation3::brightness(Body3::ball(0.8)),
                                                 EvenValuation3::mixed_quadratic(a), EvenValuation3::combo({1, 0.5, -2, 0.3})};
                  Outcome o;
                  for (const auto& phi : vals)
                    for (const auto& k : probes3(rng)) {
                      o.residual = std::max(o.residual, std::abs(phi(reflect(k)) - phi(k)));
                      ++o.instances;
                    }
                  return o;
                }});
  return cs;
}

std::vector<CaseDef> lefschetz_cases(const VerifyConfig&) {
  std::vector<CaseDef> cs;
  cs.push_back({"planar_V1_squared", "V1.(V1.chi) = (pi/2) vol in the plane", 1e-10, [](std::mt19937_64&) {
                  const auto v1 = Valuation2::intrinsic1();
                  const auto p = product(v1, product(v1, Valuation2::euler_char()));
                  Outcome o;
                  o.instances = 1;
                  o.residual = std::max(std::abs(p.c2() - kPi / 2), p.degree_part(0).max_coeff_diff(Valuation2()));
                  o.residual = std::max(o.residual, p.degree_part(1).max_coeff_diff(Valuation2()));
                  return o;
                }});
  cs.push_back({"planar_kappa", "V1.phi = kappa F^-1 Lambda F phi with one kappa for degree 0 and degree 1", 1e-9,
                [](std::mt19937_64& rng) {
                  const auto chi = Valuation2::euler_char();
                  const double kappa = mult_by_V1(chi).f().a(0) / fourier_inverse(lambda_op(fourier(chi))).f().a(0);
                  Outcome o;
                  o.values["kappa"] = kappa;
                  for (; o.instances < 50; ++o.instances) {
                    const auto phi = random_valuation(rng, 12).degree_part(1);
                    const auto l = mult_by_V1(phi);
                    const auto r = fourier_inverse(lambda_op(fourier(phi)));
                    o.residual = std::max(o.residual, l.max_coeff_diff(kappa * r));
                  }
                  return o;
                }});
  cs.push_back({"lambda_constants", "Lambda V_k = c_k V_(k-1), c_k fitted on cube and ball agree", 1e-6,
                [](std::mt19937_64&) {
                  const auto& lc = lambda_constants();
                  Outcome o;
                  o.instances = 6;
                  o.residual = lc.spread;
                  for (int k = 1; k < 4; ++k) {
                    o.values["c" + std::to_string(k)] = lc.c[k];
                    if (!(lc.c[k] > 0)) o.residual = std::max(o.residual, 1.0);
                  }
                  return o;
                }});
  cs.push_back({"lambda_composition", "Lambda^2 V3 = c3 c2 V1 by iterated numeric fits", 1e-6, [](std::mt19937_64& rng) {
                  const auto& lc = lambda_constants();
                  const auto v3 = EvenValuation3::black_box([](const Body3& b) { return intrinsic_volume(3, b); }, 3);
                  const auto l2 = lambda_numeric(lambda_numeric(v3));
                  Outcome o;
                  for (const auto& k : probes3(rng)) {
                    o.residual = std::max(o.residual, rel(l2(k), lc.c[3] * lc.c[2] * intrinsic_volume(1, k)));
                    ++o.instances;
                  }
                  return o;
                }});
  cs.push_back({"lambda_powers_nonzero", "Lambda^(2i-3) V_i is a nonzero multiple of V_(3-i), i = 2, 3", 0.0,
                [](std::mt19937_64&) {
                  const auto rep = lefschetz_invariant_check();
                  Outcome o;
                  o.instances = 2;
                  o.values["i2"] = rep.lambda_powers[0];
                  o.values["i3"] = rep.lambda_powers[1];
                  o.residual = (std::abs(rep.lambda_powers[0]) > 1e-6 && std::abs(rep.lambda_powers[1]) > 1e-6) ? 0.0 : 1.0;
                  return o;
                }});
  cs.push_back({"kappa_consistency", "V1.V_k = kappa F^-1 Lambda F V_k with one kappa for k = 0, 1, 2", 1e-6,
                [](std::mt19937_64&) {
                  const auto rep = lefschetz_invariant_check();
                  Outcome o;
                  o.instances = 3;
                  for (int k = 0; k < 3; ++k) o.values["kappa" + std::to_string(k)] = rep.kappa[k];
                  o.residual = rep.kappa_spread;
                  return o;
                }});
  cs.push_back({"v1_action_associative", "V1.(V1.V_k) = (V1.V1).V_k for the induced action", 1e-6, [](std::mt19937_64&) {
                  const auto rep = lefschetz_invariant_check();
                  Outcome o;
                  o.instances = 2;
                  o.residual = rep.assoc_residual;
                  return o;
                }});
  cs.push_back({"v1_powers_nonzero", "V1^(3-2i) maps V_i to a nonzero multiple of V_(3-i), i = 0, 1", 0.0,
                [](std::mt19937_64&) {
                  const auto rep = lefschetz_invariant_check();
                  Outcome o;
                  o.instances = 2;
                  o.values["i0"] = rep.v1_powers[0];
                  o.values["i1"] = rep.v1_powers[1];
                  o.residual = (std::abs(rep.v1_powers[0]) > 1e-6 && std::abs(rep.v1_powers[1]) > 1e-6) ? 0.0 : 1.0;
                  return o;
                }});
  return cs;
}

std::vector<CaseDef> cases_of(const std::string& suite, const VerifyConfig& cfg) {
  if (suite == "algebra2d") return algebra2d_cases(cfg);
  if (suite == "fourier2d") return fourier2d_cases(cfg);
  if (suite == "functorial") return functorial_cases(cfg);
  if (suite == "basechange") return basechange_cases(cfg);
  if (suite == "even3d") return even3d_cases(cfg);
  if (suite == "lefschetz") return lefschetz_cases(cfg);
  throw std::invalid_argument("unknown suite \"" + suite + "\"");
}

}  // namespace

VerifyConfig resolve_config(const ConfigOverrides& flags, const io::json& file_in,
                            const std::function<const char*(const char*)>& getenv) {
  VerifyConfig c;
  if (!file_in.is_null() && !file_in.is_object()) throw std::invalid_argument("malformed config: expected a JSON object");
  const io::json file = file_in.is_null() ? io::json::object() : file_in;
  static const char* known[] = {"band_limit", "grid", "seed", "tol_exact", "tol_quad", "suite", "out"};
  for (const auto& [key, value] : file.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw std::invalid_argument("malformed config: unknown key \"" + key + "\"");
  }
  try {
    c.band_limit = file.value("band_limit", c.band_limit);
    c.grid = file.value("grid", c.grid);
    c.seed = file.value("seed", c.seed);
    c.tol_exact = file.value("tol_exact", c.tol_exact);
    c.tol_quad = file.value("tol_quad", c.tol_quad);
    c.suite = file.value("suite", c.suite);
    c.out = file.value("out", c.out);
  } catch (const io::json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }

  auto env = [&](const char* name, auto& field) {
    const char* v = getenv(name);
    if (!v || !*v) return;
    using T = std::decay_t<decltype(field)>;
    try {
      std::size_t used = 0;
      if constexpr (std::is_same_v<T, std::string>) {
        field = v;
        used = field.size();
      } else if constexpr (std::is_same_v<T, double>) {
        field = std::stod(v, &used);
      } else if constexpr (std::is_same_v<T, unsigned>) {
        field = static_cast<unsigned>(std::stoul(v, &used));
      } else {
        field = std::stoi(v, &used);
      }
      if (used != std::string(v).size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("malformed config: ") + name + "=" + v);
    }
  };
  env("VALF_BAND_LIMIT", c.band_limit);
  env("VALF_GRID", c.grid);
  env("VALF_SEED", c.seed);
  env("VALF_TOL_EXACT", c.tol_exact);
  env("VALF_TOL_QUAD", c.tol_quad);
  env("VALF_SUITE", c.suite);
  env("VALF_OUT", c.out);

  if (flags.band_limit) c.band_limit = *flags.band_limit;
  if (flags.grid) c.grid = *flags.grid;
  if (flags.seed) c.seed = *flags.seed;
  if (flags.tol_exact) c.tol_exact = *flags.tol_exact;
  if (flags.tol_quad) c.tol_quad = *flags.tol_quad;
  if (flags.suite) c.suite = *flags.suite;
  if (flags.out) c.out = *flags.out;

  if (c.band_limit < 1 || c.band_limit > 256) throw std::invalid_argument("malformed config: band_limit must be 1..256");
  if (c.grid < 8) throw std::invalid_argument("malformed config: grid must be at least 8");
  if (!(c.tol_exact > 0) || !(c.tol_quad > 0)) throw std::invalid_argument("malformed config: tolerances must be positive");
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra2d", "fourier2d", "functorial",
                                                 "basechange", "even3d",    "lefschetz"};
  return names;
}

bool SuiteReport::passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass; });
}

const CaseResult* SuiteReport::find(const std::string& id) const {
  for (const auto& c : cases)
    if (c.id == id) return &c;
  return nullptr;
}

SuiteReport verify(const std::string& suite, const VerifyConfig& config) {
  const auto start = Clock::now();
  std::vector<CaseDef> defs;
  if (suite == "all") {
    for (const auto& s : suite_names())
      for (auto& c : cases_of(s, config)) {
        c.id = s + "/" + c.id;
        defs.push_back(std::move(c));
      }
  } else {
    defs = cases_of(suite, config);
  }

  std::vector<CaseResult> results(defs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < defs.size(); i = next++) {
      const auto& d = defs[i];
      const auto t0 = Clock::now();
      // Per-case stream: depends on the seed and the case id only.
      const auto h = fnv1a(d.id.substr(d.id.find('/') + 1));
      std::seed_seq seq{config.seed, static_cast<unsigned>(h), static_cast<unsigned>(h >> 32)};
      std::mt19937_64 rng(seq);
      CaseResult r;
      r.id = d.id;
      r.anchor = d.anchor;
      r.tolerance = d.tolerance;
      try {
        const Outcome o = d.run(rng);
        r.residual = o.residual;
        r.instances = o.instances;
        r.values = o.values;
        r.pass = std::isfinite(o.residual) && o.residual <= d.tolerance;
      } catch (const std::exception& e) {
        r.residual = std::numeric_limits<double>::infinity();
        r.anchor += " [error: " + std::string(e.what()) + "]";
      }
      r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
      results[i] = std::move(r);
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), defs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SuiteReport rep{suite, config, std::move(results)};
  rep.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return rep;
}

io::json to_json(const VerifyConfig& c) {
  return {{"band_limit", c.band_limit}, {"grid", c.grid},        {"seed", c.seed},
          {"tol_exact", c.tol_exact},   {"tol_quad", c.tol_quad}, {"suite", c.suite}};
}

io::json to_json(const SuiteReport& r) {
  io::json cases = io::json::array();
  for (const auto& c : r.cases) {
    io::json j = {{"id", c.id},       {"anchor", c.anchor},       {"residual", c.residual},
                  {"tolerance", c.tolerance}, {"pass", c.pass}, {"instances", c.instances}};
    if (!std::isfinite(c.residual)) j["residual"] = "inf";
    if (!c.values.empty()) j["values"] = c.values;
    cases.push_back(j);
  }
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(fnv1a(cases.dump())));
  io::json timings = io::json::object();
  for (const auto& c : r.cases) timings[c.id] = c.seconds;
  return {{"suite", r.suite},     {"pass", r.passed()},           {"config", to_json(r.config)},
          {"cases", cases},       {"cases_digest", digest},       {"wall_seconds", r.wall_seconds},
          {"case_seconds", timings}};
}

}  // namespace valf

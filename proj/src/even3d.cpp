#include "valf/even3d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "valf/numerics.hpp"
#include "valf/trig_poly.hpp"

namespace valf {

namespace {

constexpr double kBall3 = 4.0 * kPi / 3.0;

VecX to_x(const Vec3& v) { return VecX(v); }
Vec3 to_3(const VecX& v) { return Vec3(v(0), v(1), v(2)); }

void require3(const Body3& k, const char* what) {
  if (k.poly.dim() != 3 || k.poly.empty()) throw std::invalid_argument(std::string(what) + ": expected a nonempty body in R^3");
}

double diameter(const Body3& k) { return k.poly.diameter() + 2.0 * k.radius; }

/// Cubic through ε = i·h, i = 0..4; throws when the samples are not cubic.
Eigen::VectorXd cubic_fit(const std::function<double(double)>& f, double h, const char* what) {
  std::vector<double> eps, vals;
  for (int i = 0; i <= 4; ++i) {
    eps.push_back(i * h);
    vals.push_back(f(i * h));
  }
  const PolyFit fit = polyfit(eps, vals, 3);
  if (fit.relative_residual > 1e-6) throw std::runtime_error(std::string(what) + ": samples are not a cubic in epsilon");
  return fit.coeffs;
}

double width(const Body3& k, const Vec3& n) { return support(k, n) + support(k, -n); }

/// V(K, A, A) = ⅓ d/dε vol(A + εK) at 0.
double mixed_kaa_fit(const Body3& k, const Body3& a) {
  const double h = 0.1 * std::max(1.0, diameter(a));
  return cubic_fit([&](double e) { return volume(a + scale(k, e)); }, h, "mixed volume")(1) / 3.0;
}

}  // namespace

Body3 Body3::from_polytope(const Polytope& p) {
  if (p.dim() != 3) throw std::invalid_argument("Body3: polytope must live in R^3");
  return {p, 0.0};
}

Body3 Body3::from_points(const std::vector<Vec3>& points) {
  std::vector<VecX> pts;
  for (const auto& p : points) pts.push_back(to_x(p));
  return {Polytope(3, pts), 0.0};
}

Body3 Body3::ball(double r, const Vec3& center) {
  if (r < 0) throw std::invalid_argument("Body3::ball: negative radius");
  return {Polytope::point(to_x(center)), r};
}

Body3 Body3::cube(double side) { return {Polytope::box(VecX::Zero(3), VecX::Constant(3, side)), 0.0}; }

Body3 Body3::segment(const Vec3& u) { return from_points({Vec3::Zero(), u}); }

Body3 Body3::square(const Vec3& e1, const Vec3& e2) { return from_points({Vec3::Zero(), e1, e2, e1 + e2}); }

Body3 operator+(const Body3& a, const Body3& b) { return {minkowski_sum(a.poly, b.poly), a.radius + b.radius}; }

Body3 scale(const Body3& k, double s) { return {scale(k.poly, s), k.radius * std::abs(s)}; }

Body3 transform(const Body3& k, const Eigen::Matrix3d& g) {
  if (k.radius > 0 && (g.transpose() * g - Eigen::Matrix3d::Identity()).norm() > 1e-9)
    throw std::invalid_argument("transform: a body with a ball summand needs an orthogonal map");
  return {linear_image(k.poly, g), k.radius};
}

Body3 reflect(const Body3& k) { return scale(k, -1.0); }

double support(const Body3& k, const Vec3& u) {
  double best = -1e300;
  for (const auto& v : k.poly.vertices()) best = std::max(best, to_3(v).dot(u));
  return best + k.radius * u.norm();
}

std::pair<Vec3, Vec3> plane_basis(const Vec3& u) {
  const Vec3 n = u.normalized();
  Vec3 axis = Vec3::UnitX();
  if (std::abs(n.y()) < std::abs(n.dot(axis))) axis = Vec3::UnitY();
  if (std::abs(n.z()) < std::abs(n.dot(axis))) axis = Vec3::UnitZ();
  const Vec3 e1 = n.cross(axis).normalized();
  return {e1, n.cross(e1)};
}

SteinerData steiner_data(const Polytope& p) {
  if (p.dim() != 3 || p.empty()) throw std::invalid_argument("steiner_data: expected a nonempty polytope in R^3");
  SteinerData s;
  const auto& vs = p.vertices();
  switch (p.affine_dim()) {
    case 0:
      break;
    case 1:
      s.edge = kPi * (vs[0] - vs[1]).norm();
      break;
    case 2: {
      Vec3 cross = Vec3::Zero();
      double perimeter = 0.0;
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const Vec3 a = to_3(vs[i]), b = to_3(vs[(i + 1) % vs.size()]);
        cross += a.cross(b);
        perimeter += (b - a).norm();
      }
      s.surface = cross.norm();  // two sides of area |cross|/2
      s.edge = 0.5 * kPi * perimeter;
      break;
    }
    default: {
      std::vector<Vec3> pts;
      for (const auto& v : vs) pts.push_back(to_3(v));
      const Hull3 hull = convex_hull3(pts);
      s.vol = hull.volume();
      s.surface = hull.surface_area();
      std::map<std::pair<int, int>, Vec3> normal_of;
      for (const auto& t : hull.triangles) {
        const Vec3& a = hull.points[t[0]];
        const Vec3 n = (hull.points[t[1]] - a).cross(hull.points[t[2]] - a).normalized();
        for (int j = 0; j < 3; ++j) normal_of[{t[j], t[(j + 1) % 3]}] = n;
      }
      for (const auto& [e, n1] : normal_of) {
        if (e.first > e.second) continue;
        const Vec3& n2 = normal_of.at({e.second, e.first});
        const double angle = std::acos(std::clamp(n1.dot(n2), -1.0, 1.0));
        s.edge += 0.5 * (hull.points[e.first] - hull.points[e.second]).norm() * angle;
      }
    }
  }
  return s;
}

double volume(const Body3& k) {
  require3(k, "volume");
  const SteinerData s = steiner_data(k.poly);
  const double r = k.radius;
  return s.vol + r * (s.surface + r * (s.edge + r * kBall3));
}

std::vector<Facet> facets(const Polytope& p) {
  std::vector<Facet> out;
  if (p.dim() != 3) throw std::invalid_argument("facets: expected a polytope in R^3");
  const auto& vs = p.vertices();
  if (p.affine_dim() == 2) {
    Vec3 cross = Vec3::Zero();
    for (std::size_t i = 0; i < vs.size(); ++i) cross += to_3(vs[i]).cross(to_3(vs[(i + 1) % vs.size()]));
    const double area = 0.5 * cross.norm();
    out.push_back({area, cross.normalized()});
    out.push_back({area, -cross.normalized()});
  } else if (p.affine_dim() == 3) {
    std::vector<Vec3> pts;
    for (const auto& v : vs) pts.push_back(to_3(v));
    const Hull3 hull = convex_hull3(pts);
    for (const auto& t : hull.triangles) {
      const Vec3& a = hull.points[t[0]];
      const Vec3 c = (hull.points[t[1]] - a).cross(hull.points[t[2]] - a);
      out.push_back({0.5 * c.norm(), c.normalized()});
    }
  }
  return out;
}

double intrinsic_volume(int k, const Body3& body) {
  require3(body, "intrinsic_volume");
  if (k < 0 || k > 3) throw std::invalid_argument("intrinsic_volume: k must be 0..3");
  if (k == 0) return 1.0;
  const SteinerData s = steiner_data(body.poly);
  auto vol = [&](double e) {
    const double r = body.radius + e;
    return s.vol + r * (s.surface + r * (s.edge + r * kBall3));
  };
  if (k == 3) return vol(0.0);
  // vol(K + εB) = V₃ + 2V₂ε + πV₁ε² + (4π/3)ε³
  const Eigen::VectorXd c = cubic_fit(vol, 0.1 * std::max(1.0, diameter(body)), "intrinsic_volume");
  return k == 2 ? c(1) / 2.0 : c(2) / kPi;
}

double brightness_value(const Brightness& b, const Body3& k) {
  require3(k, "brightness");
  // Even part ½(V(K,A,A) + V(−K,A,A)); it equals V(K,A,A) for centrally
  // symmetric A and has the same Klain function in general.
  if (b.a.radius == 0.0) {
    double s = 0.0;
    for (const auto& f : b.a_facets) s += f.area * width(k, f.normal);
    return s / 6.0;
  }
  if (b.a.poly.affine_dim() == 0) return b.a.radius * b.a.radius * kPi / 3.0 * intrinsic_volume(1, k);
  return 0.5 * (mixed_kaa_fit(k, b.a) + mixed_kaa_fit(reflect(k), b.a));
}

EvenValuation3 EvenValuation3::intrinsic(int k) {
  if (k < 0 || k > 3) throw std::invalid_argument("intrinsic: k must be 0..3");
  IntrinsicCombo c;
  c.alpha[k] = 1.0;
  return EvenValuation3(c);
}

EvenValuation3 EvenValuation3::combo(const std::array<double, 4>& alpha) { return EvenValuation3(IntrinsicCombo{alpha}); }

EvenValuation3 EvenValuation3::brightness(const Body3& a) {
  require3(a, "brightness");
  return EvenValuation3(Brightness{a, a.radius == 0.0 ? facets(a.poly) : std::vector<Facet>{}});
}

EvenValuation3 EvenValuation3::black_box(std::function<double(const Body3&)> eval, int degree) {
  return EvenValuation3(BlackBox{std::move(eval), degree});
}

EvenValuation3 EvenValuation3::mixed_quadratic(const Body3& a) {
  require3(a, "mixed_quadratic");
  // Even part ½(V(K,K,A) + V(K,K,−A)).
  return black_box(
      [a](const Body3& k) {
        require3(k, "mixed_quadratic");
        if (k.radius == 0.0) {
          double s = 0.0;
          for (const auto& f : facets(k.poly)) s += f.area * width(a, f.normal);
          return s / 6.0;
        }
        const double h = 0.1 * std::max(1.0, diameter(k));
        auto fit = [&](const Body3& aa) {
          return cubic_fit([&](double e) { return volume(k + scale(aa, e)); }, h, "mixed volume")(1) / 3.0;
        };
        return 0.5 * (fit(a) + fit(reflect(a)));
      },
      2);
}

double EvenValuation3::operator()(const Body3& k) const {
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IntrinsicCombo>) {
          double s = 0.0;
          for (int j = 0; j < 4; ++j)
            if (r.alpha[j] != 0.0) s += r.alpha[j] * intrinsic_volume(j, k);
          return s;
        } else if constexpr (std::is_same_v<T, Brightness>) {
          return brightness_value(r, k);
        } else {
          return r.eval(k);
        }
      },
      rep_);
}

int EvenValuation3::degree() const {
  if (const auto* c = std::get_if<IntrinsicCombo>(&rep_)) {
    int deg = 0, count = 0;
    for (int j = 0; j < 4; ++j)
      if (c->alpha[j] != 0.0) {
        deg = j;
        ++count;
      }
    return count <= 1 ? deg : -1;
  }
  if (std::holds_alternative<Brightness>(rep_)) return 1;
  return std::get<BlackBox>(rep_).degree;
}

EvenValuation3 rotate_action(const EvenValuation3& phi, const Eigen::Matrix3d& g) {
  if (std::holds_alternative<IntrinsicCombo>(phi.rep())) return phi;
  if (const auto* b = std::get_if<Brightness>(&phi.rep())) return EvenValuation3::brightness(transform(b->a, g));
  const Eigen::Matrix3d g_inv = g.inverse();
  return EvenValuation3::black_box([phi, g_inv](const Body3& k) { return phi(transform(k, g_inv)); }, phi.degree());
}

double KlainFunction::at(const Vec3& u) const {
  const SphereGrid& grid = SphereGrid::ico4();
  if (values.size() != grid.size()) throw std::logic_error("KlainFunction: sample count does not match the grid");
  if (order == 1) {
    const auto [f, w] = grid.locate(u, grid.level());
    const auto& face = grid.faces(grid.level())[f];
    return w(0) * values[face.v[0]] + w(1) * values[face.v[1]] + w(2) * values[face.v[2]];
  }
  const auto [f, w] = grid.locate(u, grid.level() - 1);
  const auto& face = grid.faces(grid.level() - 1)[f];
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    s += w(i) * (2.0 * w(i) - 1.0) * values[face.v[i]];
    s += 4.0 * w(i) * w(j) * values[face.mid[i]];
  }
  return s;
}

KlainFunction KlainFunction::sample(int gr, const std::function<double(const Vec3&)>& f) {
  if (gr != 1 && gr != 2) throw std::invalid_argument("KlainFunction: gr must be 1 or 2");
  const SphereGrid& grid = SphereGrid::ico4();
  KlainFunction k;
  k.gr = gr;
  k.values.assign(grid.size(), 0.0);
  for (int i = 0; i < static_cast<int>(grid.size()); ++i)
    if (grid.antipode(i) > i) k.values[i] = k.values[grid.antipode(i)] = f(grid.vertices()[i]);
  return k;
}

KlainFunction klain_function(const EvenValuation3& phi, int gr) {
  if (gr != 1 && gr != 2) throw std::invalid_argument("klain_function: gr must be 1 or 2");
  if (phi.degree() != gr)
    throw std::invalid_argument("klain_function: valuation degree " + std::to_string(phi.degree()) +
                                " does not match Gr" + std::to_string(gr));
  if (gr == 1) return KlainFunction::sample(1, [&](const Vec3& u) { return phi(Body3::segment(u)); });
  return KlainFunction::sample(2, [&](const Vec3& u) {
    const auto [e1, e2] = plane_basis(u);
    return phi(Body3::square(e1, e2));
  });
}

KlainFunction fourier_even(const KlainFunction& k) {
  KlainFunction out = k;
  out.gr = 3 - k.gr;
  return out;
}

namespace {

double lambda_at(const EvenValuation3& phi, const Body3& k) {
  const double h = 0.1 * std::max(1.0, diameter(k));
  const Body3 unit = Body3::ball(1.0);
  return cubic_fit([&](double e) { return phi(k + scale(unit, e)); }, h, "lambda_numeric")(1);
}

}  // namespace

EvenValuation3 lambda_numeric(const EvenValuation3& phi) {
  if (const auto* c = std::get_if<IntrinsicCombo>(&phi.rep())) {
    const auto& lc = lambda_constants();
    IntrinsicCombo out;
    for (int k = 1; k < 4; ++k) out.alpha[k - 1] = lc.c[k] * c->alpha[k];
    return EvenValuation3(out);
  }
  const int d = phi.degree();
  return EvenValuation3::black_box([phi](const Body3& k) { return lambda_at(phi, k); }, d > 0 ? d - 1 : d);
}

const LambdaConstants& lambda_constants() {
  static const LambdaConstants lc = [] {
    LambdaConstants out;
    const Body3 bodies[2] = {Body3::cube(), Body3::ball(1.0)};
    for (int k = 1; k < 4; ++k) {
      const auto vk = EvenValuation3::intrinsic(k);
      double ratio[2];
      for (int b = 0; b < 2; ++b) ratio[b] = lambda_at(vk, bodies[b]) / intrinsic_volume(k - 1, bodies[b]);
      out.c[k] = 0.5 * (ratio[0] + ratio[1]);
      out.spread = std::max(out.spread, std::abs(ratio[0] - ratio[1]));
    }
    return out;
  }();
  return lc;
}

LefschetzReport lefschetz_invariant_check() {
  LefschetzReport rep;
  rep.lambda = lambda_constants();
  const auto& c = rep.lambda.c;

  // κ_m: coefficient of r^m in vol(C + rB), C the unit (3−m)-cube.
  for (int m = 0; m < 4; ++m) {
    VecX hi = VecX::Zero(3);
    for (int i = 0; i < 3 - m; ++i) hi(i) = 1.0;
    const Body3 cube{Polytope::box(VecX::Zero(3), hi), 0.0};
    rep.ball_volumes[m] =
        cubic_fit([&](double r) { return volume(cube + Body3::ball(r)); }, 0.1 * std::max(1.0, diameter(cube)),
                  "ball volumes")(m);
  }
  const auto& kap = rep.ball_volumes;

  rep.lambda_powers = {c[2], c[3] * c[2] * c[1]};

  // W_m = κ_m V_{3−m} satisfies W_j ∗ W_l = C(j+l, j) W_{j+l}; transporting
  // by F (F V_k = V_{3−k}) gives V_a·V_b = C(a+b, a) κ_{a+b}/(κ_a κ_b) V_{a+b}.
  auto binom = [](int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  for (int a = 0; a < 4; ++a)
    for (int b = 0; a + b < 4; ++b) rep.structure[a][b] = binom(a + b, a) * kap[a + b] / (kap[a] * kap[b]);
  const auto& s = rep.structure;

  for (int k = 0; k < 3; ++k) rep.kappa[k] = s[1][k] / c[3 - k];
  rep.kappa_spread = *std::max_element(rep.kappa.begin(), rep.kappa.end()) -
                     *std::min_element(rep.kappa.begin(), rep.kappa.end());

  // Induced action V₁·V_k = κ c_{3−k} V_{k+1} with κ from degree 0, against
  // (V₁·V₁)·V_k through the full product.
  const double kappa = rep.kappa[0];
  auto act = [&](int k) { return kappa * c[3 - k]; };
  for (int k = 0; k < 2; ++k)
    rep.assoc_residual = std::max(rep.assoc_residual, std::abs(act(k) * act(k + 1) - act(1) * s[2][k]));

  rep.v1_powers = {act(0) * act(1) * act(2), act(1)};
  return rep;
}

}  // namespace valf

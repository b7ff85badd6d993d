#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <variant>
#include <vector>

#include "valf/polytope.hpp"
#include "valf/sphere_grid.hpp"

namespace valf {

/// Convex body P + rB in R³: a polytope (possibly lower dimensional)
/// thickened by a ball of radius r ≥ 0.
struct Body3 {
  Polytope poly;
  double radius = 0.0;

  static Body3 from_polytope(const Polytope& p);
  static Body3 from_points(const std::vector<Vec3>& points);
  static Body3 ball(double r, const Vec3& center = Vec3::Zero());
  static Body3 cube(double side = 1.0);
  /// Segment from 0 to u.
  static Body3 segment(const Vec3& u);
  /// Unit square in the plane u^⊥, spanned by the given orthonormal pair.
  static Body3 square(const Vec3& e1, const Vec3& e2);
};

Body3 operator+(const Body3& a, const Body3& b);
Body3 scale(const Body3& k, double s);
/// g·K for a 3×3 matrix g.
Body3 transform(const Body3& k, const Eigen::Matrix3d& g);
Body3 reflect(const Body3& k);
double support(const Body3& k, const Vec3& u);

/// Orthonormal basis (e1, e2) of u^⊥ with e1 × e2 = u/|u|.
std::pair<Vec3, Vec3> plane_basis(const Vec3& u);

/// Steiner data of a polytope P: vol(P + ρB) = vol + surface·ρ + edge·ρ² + (4π/3)ρ³,
/// where edge = ½Σ ℓ_e·(exterior angle at e). Exact face decomposition;
/// lower-dimensional P included.
struct SteinerData {
  double vol = 0.0;
  double surface = 0.0;
  double edge = 0.0;
};
SteinerData steiner_data(const Polytope& p);
double volume(const Body3& k);

/// Facets of P with area and outward unit normal. A planar polytope counts
/// as two facets with normals ±n; segments and points have none.
struct Facet {
  double area;
  Vec3 normal;
};
std::vector<Facet> facets(const Polytope& p);

/// Intrinsic volume V_k(K), k = 0..3, V_k of the unit k-cube = 1. V₁ and V₂
/// come from a cubic fit of ε ↦ vol(K + εB); throws std::runtime_error if
/// the fit residual exceeds 1e−6.
double intrinsic_volume(int k, const Body3& body);

struct IntrinsicCombo {
  std::array<double, 4> alpha{};  // coefficients of V₀..V₃
};
/// K ↦ V(K, A, A), degree 1.
struct Brightness {
  Body3 a;
  std::vector<Facet> a_facets;  // cached facets of a.poly
};
struct BlackBox {
  std::function<double(const Body3&)> eval;
  int degree = -1;  // −1: not homogeneous
};

class EvenValuation3 {
public:
  using Rep = std::variant<IntrinsicCombo, Brightness, BlackBox>;

  explicit EvenValuation3(Rep rep) : rep_(std::move(rep)) {}
  static EvenValuation3 intrinsic(int k);
  static EvenValuation3 combo(const std::array<double, 4>& alpha);
  static EvenValuation3 brightness(const Body3& a);
  static EvenValuation3 black_box(std::function<double(const Body3&)> eval, int degree);
  /// K ↦ V(K, K, A), degree 2.
  static EvenValuation3 mixed_quadratic(const Body3& a);

  double operator()(const Body3& k) const;
  /// Degree of homogeneity, or −1 for a non-homogeneous combination.
  int degree() const;
  const Rep& rep() const { return rep_; }

private:
  Rep rep_;
};

/// (g·φ)(K) = φ(g⁻¹K) for a rotation g.
EvenValuation3 rotate_action(const EvenValuation3& phi, const Eigen::Matrix3d& g);
/// Mixed volume V(K, A, A).
double brightness_value(const Brightness& b, const Body3& k);

/// Sphere function on the ico4 grid read as a function on lines (gr = 1,
/// value at u is for the line ℝu) or planes (gr = 2, value at u is for u^⊥).
struct KlainFunction {
  int gr = 1;
  std::vector<double> values;  // one per grid vertex
  int order = 2;               // 1: linear on level-4 faces, 2: quadratic on level-3 faces

  double at(const Vec3& u) const;
  /// Samples f on the grid; f is evaluated once per antipodal pair.
  static KlainFunction sample(int gr, const std::function<double(const Vec3&)>& f);
};

/// Throws std::invalid_argument if φ is not homogeneous of degree gr.
KlainFunction klain_function(const EvenValuation3& phi, int gr);
KlainFunction fourier_even(const KlainFunction& k);

/// Derivative-at-zero of ε ↦ φ(K + εB) by a cubic through ε = 0, h, 2h, 3h,
/// h = 0.1·max(1, diam K).
EvenValuation3 lambda_numeric(const EvenValuation3& phi);

/// ΛV_k = c_k·V_{k−1}, c_k fitted on the unit cube and the unit ball.
struct LambdaConstants {
  std::array<double, 4> c{};  // c[0] = 0
  double spread = 0.0;        // max disagreement between the two bodies
};
const LambdaConstants& lambda_constants();

struct LefschetzReport {
  LambdaConstants lambda;
  /// κ_m = vol of the unit m-ball, fitted from vol(C + rB) on unit cubes.
  std::array<double, 4> ball_volumes{};
  /// Λ^{2i−3}V_i = coeff·V_{3−i}: [0] for i = 2, [1] for i = 3.
  std::array<double, 2> lambda_powers{};
  /// Product structure constants V_a·V_b = s(a,b)·V_{a+b} from the
  /// convolution identity μ_r ∗ μ_s = μ_{r+s}.
  std::array<std::array<double, 4>, 4> structure{};
  /// κ_k = s(1,k)/c_{3−k} for k = 0, 1, 2.
  std::array<double, 3> kappa{};
  double kappa_spread = 0.0;
  /// max over k of |s(1,k)s(1,k+1) − s(1,1)s(2,k)|.
  double assoc_residual = 0.0;
  /// V₁³·V₀ = p₀·V₃ and V₁·V₁ = p₁·V₂.
  std::array<double, 2> v1_powers{};
};
LefschetzReport lefschetz_invariant_check();

}  // namespace valf

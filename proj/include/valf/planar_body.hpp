#pragma once

#include <array>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "valf/trig_poly.hpp"

namespace valf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Row-major 2×2 matrix.
using Mat2 = std::array<double, 4>;

Mat2 rotation(double alpha);

inline constexpr int kDefaultBandLimit = 32;
inline constexpr int kDefaultGridSize = 512;
inline constexpr double kConvexityTol = 1e-9;

struct SupportFn {
  TrigPoly h;
};

/// Counterclockwise vertices in strictly convex position. One vertex is a
/// point, two vertices a segment (traversed there and back).
struct Polygon {
  std::vector<Vec2> vertices;
};

/// Area measure S₁(K,·) on the circle: smooth density plus atoms.
struct AreaMeasure1 {
  struct Atom {
    double angle;
    double mass;
  };
  TrigPoly density;
  std::vector<Atom> atoms;

  double total_mass() const;
  /// ∫ g dS₁.
  double integrate(const TrigPoly& g) const;
  /// (∫ cos θ dS₁, ∫ sin θ dS₁); zero for a closed boundary.
  std::array<double, 2> centroid() const;
};

/// Convex compact body in the plane, stored either as a support function or
/// as a polygon. Immutable after construction.
class PlanarBody {
public:
  /// Throws std::invalid_argument if h + h'' dips below −tol on a dense grid.
  static PlanarBody support(TrigPoly h, double tol = kConvexityTol);
  /// Throws unless the vertices are counterclockwise, strictly convex, and
  /// free of repeats.
  static PlanarBody polygon(std::vector<Vec2> vertices);
  /// Convex hull of arbitrary points.
  static PlanarBody hull(std::vector<Vec2> points);

  static PlanarBody point(Vec2 p = {});
  static PlanarBody segment(Vec2 p, Vec2 q);
  static PlanarBody disc(double radius = 1.0, Vec2 center = {});
  /// Axis-aligned square [0,side]².
  static PlanarBody square(double side = 1.0);
  static PlanarBody regular_polygon(int n, double circumradius = 1.0, double phase = 0.0);

  bool is_polygon() const { return std::holds_alternative<Polygon>(rep_); }
  bool is_support() const { return std::holds_alternative<SupportFn>(rep_); }
  /// Set when the body was produced by resampling (mixed-representation ops,
  /// non-orthogonal transforms of smooth bodies).
  bool approximate() const { return approximate_; }

  const TrigPoly& support_fn() const;
  const std::vector<Vec2>& vertices() const;

  /// h_K(θ).
  double support_at(double theta) const;

private:
  using Rep = std::variant<SupportFn, Polygon>;
  explicit PlanarBody(Rep rep, bool approximate = false)
      : rep_(std::move(rep)), approximate_(approximate) {}

  Rep rep_;
  bool approximate_ = false;

  friend PlanarBody minkowski_sum(const PlanarBody&, const PlanarBody&);
  friend PlanarBody transform_body(const PlanarBody&, const Mat2&);
  friend PlanarBody from_support_samples(std::span<const double>);
};

PlanarBody minkowski_sum(const PlanarBody& a, const PlanarBody& b);
double area(const PlanarBody& a);
double perimeter(const PlanarBody& a);
AreaMeasure1 area_measure(const PlanarBody& a);
/// V(A,B) = ½ ∫ h_A dS₁(B).
double mixed_volume(const PlanarBody& a, const PlanarBody& b);
/// Throws std::invalid_argument for singular g.
PlanarBody transform_body(const PlanarBody& a, const Mat2& g);
PlanarBody reflect(const PlanarBody& a);
PlanarBody rotate(const PlanarBody& a, double alpha);
PlanarBody translate(const PlanarBody& a, Vec2 t);
/// Circumscribed polygon of the support lines at the uniform grid angles
/// 2πj/M; flagged approximate.
PlanarBody from_support_samples(std::span<const double> samples);
/// Fourier coefficients of h_K up to `band_limit`; exact (closed-form arc
/// integrals) for polygons, truncation for support-function bodies.
TrigPoly support_coefficients(const PlanarBody& a, int band_limit = kDefaultBandLimit);
/// Length of the orthogonal projection onto the line spanned by `dir`.
double width(const PlanarBody& a, Vec2 dir);

/// h = 1 + translation + Σ_{k≥2} c_k (cos kθ, sin kθ) with Σ k²|c_k| ≤ 0.8,
/// which certifies h + h'' ≥ 0.2.
PlanarBody random_smooth_body(std::mt19937_64& rng, int band_limit = kDefaultBandLimit);
/// Random convex polygon: hull of points on a jittered ellipse.
PlanarBody random_polygon(std::mt19937_64& rng, int max_vertices = 9);

}  // namespace valf

#pragma once

#include <Eigen/Dense>
#include <array>
#include <random>
#include <vector>

#include "valf/planar_body.hpp"

namespace valf {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// Triangulated boundary of a full-dimensional convex polytope in R³,
/// outward oriented.
struct Hull3 {
  std::vector<Eigen::Vector3d> points;
  std::vector<std::array<int, 3>> triangles;

  double volume() const;
  double surface_area() const;
};

/// Throws std::invalid_argument if the points are affinely degenerate.
Hull3 convex_hull3(const std::vector<Eigen::Vector3d>& points);

/// Convex hull of finitely many points in R^d, 1 ≤ d ≤ 3, kept as its
/// extreme points. The empty polytope has no vertices.
class Polytope {
public:
  Polytope() = default;
  Polytope(int dim, const std::vector<VecX>& points);

  static Polytope point(const VecX& p);
  static Polytope interval(double a, double b);
  /// Axis-parallel box [lo, hi].
  static Polytope box(const VecX& lo, const VecX& hi);
  /// Polygon, segment or point bodies only.
  static Polytope from_planar(const PlanarBody& body);

  int dim() const { return dim_; }
  bool empty() const { return vertices_.empty(); }
  const std::vector<VecX>& vertices() const { return vertices_; }
  /// Dimension of the affine hull; −1 when empty.
  int affine_dim() const { return affine_dim_; }

  /// d-dimensional Lebesgue measure; 0 for lower-dimensional polytopes.
  double volume() const;
  double diameter() const;
  PlanarBody to_planar() const;

private:
  int dim_ = 0;
  int affine_dim_ = -1;
  std::vector<VecX> vertices_;
};

/// Image under an m×n matrix; a polytope in R^m.
Polytope linear_image(const Polytope& k, const MatX& m);
Polytope minkowski_sum(const Polytope& a, const Polytope& b);
Polytope scale(const Polytope& a, double s);
Polytope translate(const Polytope& a, const VecX& t);
/// A × B in R^{dim A + dim B}.
Polytope cartesian_product(const Polytope& a, const Polytope& b);
/// K ∩ {x : ⟨n, x⟩ = c}, still as a subset of R^d.
Polytope slice(const Polytope& k, const VecX& normal, double offset);

/// Hull of `n_points` random points on a jittered ellipsoid, randomly translated.
Polytope random_polytope(std::mt19937_64& rng, int dim, int n_points = 8);
/// Seeded family of test bodies: boxes, random polytopes and polygonal
/// approximations of discs and smooth bodies (dimension 2), and a
/// 42-vertex ball approximation (dimension 3).
std::vector<Polytope> probe_family(int dim, unsigned seed, int count = 20);

}  // namespace valf

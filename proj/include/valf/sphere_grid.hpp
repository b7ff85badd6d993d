#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace valf {

using Vec3 = Eigen::Vector3d;

/// Icosphere: the icosahedron subdivided `level` times, vertices projected to
/// the unit sphere. Vertices of coarser levels keep their indices, so the
/// first 10·4^(ℓ)+2 vertices form the level-ℓ grid. The vertex set is closed
/// under u ↦ −u.
class SphereGrid {
public:
  struct Face {
    std::array<int, 3> v;
    /// Vertices added when this face was subdivided: mid[0] on edge v0v1,
    /// mid[1] on v1v2, mid[2] on v2v0. −1 on the finest level.
    std::array<int, 3> mid{-1, -1, -1};
    /// Child faces on the next level; −1 on the finest level.
    std::array<int, 4> child{-1, -1, -1, -1};
  };

  explicit SphereGrid(int level);
  /// Shared level-4 grid (2562 vertices).
  static const SphereGrid& ico4();

  int level() const { return level_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  int antipode(int i) const { return antipode_[i]; }
  /// Faces of level ℓ (0 ≤ ℓ ≤ level()).
  const std::vector<Face>& faces(int l) const { return faces_[l]; }

  /// Face of level ℓ containing direction u and the gnomonic barycentric
  /// coordinates of u in it.
  std::pair<int, Vec3> locate(const Vec3& u, int l) const;

private:
  int level_;
  std::vector<Vec3> vertices_;
  std::vector<int> antipode_;
  std::vector<std::vector<Face>> faces_;
};

}  // namespace valf

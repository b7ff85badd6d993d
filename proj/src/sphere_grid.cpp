#include "valf/sphere_grid.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace valf {

namespace {

/// Barycentric coordinates of the central projection of u onto the plane of
/// the triangle (a, b, c).
Vec3 gnomonic_barycentric(const Vec3& u, const Vec3& a, const Vec3& b, const Vec3& c) {
  Eigen::Matrix3d m;
  m << a, b, c;
  Vec3 w = m.partialPivLu().solve(u);
  return w / w.sum();
}

}  // namespace

SphereGrid::SphereGrid(int level) : level_(level) {
  if (level < 0 || level > 6) throw std::invalid_argument("SphereGrid: level must be between 0 and 6");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const double base[12][3] = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                              {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (const auto& p : base) vertices_.push_back(Vec3(p[0], p[1], p[2]).normalized());
  const int tri[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                          {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                          {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  faces_.emplace_back();
  for (const auto& f : tri) faces_[0].push_back({{f[0], f[1], f[2]}});

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> cache;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      vertices_.push_back((vertices_[a] + vertices_[b]).normalized());
      const int idx = static_cast<int>(vertices_.size()) - 1;
      cache.emplace(key, idx);
      return idx;
    };
    std::vector<Face> next;
    for (auto& f : faces_[l]) {
      const int a = f.v[0], b = f.v[1], c = f.v[2];
      const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      f.mid = {ab, bc, ca};
      const int base_idx = static_cast<int>(next.size());
      next.push_back({{a, ab, ca}});
      next.push_back({{ab, b, bc}});
      next.push_back({{ca, bc, c}});
      next.push_back({{ab, bc, ca}});
      f.child = {base_idx, base_idx + 1, base_idx + 2, base_idx + 3};
    }
    faces_.push_back(std::move(next));
  }

  // Antipodes: the construction is symmetric, so −v is a vertex; match by
  // rounded coordinates.
  std::map<std::array<long long, 3>, int> index;
  auto key = [](const Vec3& v) {
    return std::array<long long, 3>{std::llround(v.x() * 1e9), std::llround(v.y() * 1e9), std::llround(v.z() * 1e9)};
  };
  for (int i = 0; i < static_cast<int>(vertices_.size()); ++i) index.emplace(key(vertices_[i]), i);
  antipode_.resize(vertices_.size());
  for (int i = 0; i < static_cast<int>(vertices_.size()); ++i) {
    auto it = index.find(key(-vertices_[i]));
    if (it == index.end()) throw std::logic_error("SphereGrid: vertex set is not antipodally symmetric");
    antipode_[i] = it->second;
  }
}

const SphereGrid& SphereGrid::ico4() {
  static const SphereGrid grid(4);
  return grid;
}

std::pair<int, Vec3> SphereGrid::locate(const Vec3& u, int l) const {
  if (l < 0 || l > level_) throw std::invalid_argument("SphereGrid::locate: level out of range");
  const Vec3 d = u.normalized();
  auto best_of = [&](const std::vector<int>& candidates, int lev) {
    int best = -1;
    double best_min = -1e300;
    Vec3 best_w;
    for (int f : candidates) {
      const auto& face = faces_[lev][f];
      const Vec3& a = vertices_[face.v[0]];
      const Vec3& b = vertices_[face.v[1]];
      const Vec3& c = vertices_[face.v[2]];
      if (d.dot(a + b + c) <= 0) continue;
      const Vec3 w = gnomonic_barycentric(d, a, b, c);
      if (w.minCoeff() > best_min) {
        best_min = w.minCoeff();
        best = f;
        best_w = w;
      }
    }
    return std::pair{best, best_w};
  };
  std::vector<int> cand(faces_[0].size());
  for (int i = 0; i < static_cast<int>(cand.size()); ++i) cand[i] = i;
  auto found = best_of(cand, 0);
  for (int lev = 0; lev < l; ++lev) {
    const auto& ch = faces_[lev][found.first].child;
    found = best_of({ch[0], ch[1], ch[2], ch[3]}, lev + 1);
  }
  return found;
}

}  // namespace valf

#include "valf/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace valf {

namespace {

double extent(const std::vector<VecX>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return std::max(1.0, s);
}

/// Indices of the extreme points of a 2D point set in counterclockwise order
/// (Andrew's monotone chain). Collinear boundary points are dropped.
std::vector<int> hull2_indices(const std::vector<Eigen::Vector2d>& p, double eps) {
  const int n = static_cast<int>(p.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // Sweep along a generic direction: axis-parallel edges are common in the
  // inputs, and rounding noise in a tied sort key can reorder collinear points.
  const Eigen::Vector2d dir(std::cos(0.5123), std::sin(0.5123));
  const Eigen::Vector2d perp(-dir.y(), dir.x());
  std::vector<std::pair<double, double>> key(n);
  for (int i = 0; i < n; ++i) key[i] = {dir.dot(p[i]), perp.dot(p[i])};
  std::sort(idx.begin(), idx.end(), [&key](int i, int j) { return key[i] < key[j]; });
  auto turn = [&p](int o, int a, int b) {
    const Eigen::Vector2d u = p[a] - p[o];
    const Eigen::Vector2d v = p[b] - p[o];
    return u.x() * v.y() - u.y() * v.x();
  };
  std::vector<int> h(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], idx[i]) <= eps) --k;
    h[k++] = idx[i];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && turn(h[k - 2], h[k - 1], idx[i]) <= eps) --k;
    h[k++] = idx[i];
  }
  h.resize(std::max(1, k - 1));
  return h;
}

double triangle_area2(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const Eigen::Vector2d u = b - a;
  const Eigen::Vector2d v = c - a;
  return u.x() * v.y() - u.y() * v.x();
}

}  // namespace

double Hull3::volume() const {
  double v = 0.0;
  for (const auto& t : triangles) v += points[t[0]].dot(points[t[1]].cross(points[t[2]]));
  return v / 6.0;
}

double Hull3::surface_area() const {
  double s = 0.0;
  for (const auto& t : triangles) s += (points[t[1]] - points[t[0]]).cross(points[t[2]] - points[t[0]]).norm();
  return 0.5 * s;
}

Hull3 convex_hull3(const std::vector<Eigen::Vector3d>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw std::invalid_argument("convex_hull3: need at least four points");
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = 1e-11 * scale;

  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (pts[i].x() < pts[i0].x()) i0 = i;
  auto argmax = [n](auto&& score) {
    int best = 0;
    double bv = -1.0;
    for (int i = 0; i < n; ++i) {
      const double v = score(i);
      if (v > bv) {
        bv = v;
        best = i;
      }
    }
    return std::pair{best, bv};
  };
  const auto [i1, d1] = argmax([&](int i) { return (pts[i] - pts[i0]).norm(); });
  const Eigen::Vector3d axis = (pts[i1] - pts[i0]).normalized();
  const auto [i2, d2] = argmax([&](int i) { return (pts[i] - pts[i0]).cross(axis).norm(); });
  const Eigen::Vector3d pn = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  const auto [i3, d3] = argmax([&](int i) { return std::abs((pts[i] - pts[i0]).dot(pn)); });
  if (d1 <= eps || d2 <= eps || d3 <= eps) throw std::invalid_argument("convex_hull3: points are affinely degenerate");

  struct Face {
    int a, b, c;
    Eigen::Vector3d normal;
    double offset;
    bool alive;
  };
  std::vector<Face> faces;
  const Eigen::Vector3d inner = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);
  auto add_face = [&](int a, int b, int c, bool orient) {
    Eigen::Vector3d nrm = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    if (orient && nrm.dot(inner - pts[a]) > 0) {
      std::swap(b, c);
      nrm = -nrm;
    }
    nrm.normalize();
    faces.push_back({a, b, c, nrm, nrm.dot(pts[a]), true});
  };
  add_face(i0, i1, i2, true);
  add_face(i0, i1, i3, true);
  add_face(i0, i2, i3, true);
  add_face(i1, i2, i3, true);

  auto key = [](int a, int b) { return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b); };
  std::unordered_set<long long> edges;
  std::vector<int> visible;
  int dead = 0;
  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      if (faces[f].alive && faces[f].normal.dot(pts[p]) - faces[f].offset > eps) visible.push_back(f);
    if (visible.empty()) continue;
    edges.clear();
    for (int f : visible) {
      const auto& fc = faces[f];
      edges.insert(key(fc.a, fc.b));
      edges.insert(key(fc.b, fc.c));
      edges.insert(key(fc.c, fc.a));
    }
    for (int f : visible) {
      faces[f].alive = false;
      ++dead;
      const int e[3][2] = {{faces[f].a, faces[f].b}, {faces[f].b, faces[f].c}, {faces[f].c, faces[f].a}};
      for (const auto& ed : e)
        if (!edges.count(key(ed[1], ed[0]))) add_face(ed[0], ed[1], p, false);
    }
    if (dead > static_cast<int>(faces.size()) / 2) {
      std::erase_if(faces, [](const Face& f) { return !f.alive; });
      dead = 0;
    }
  }

  Hull3 h;
  std::vector<int> remap(n, -1);
  for (const auto& f : faces) {
    if (!f.alive) continue;
    std::array<int, 3> t{f.a, f.b, f.c};
    for (int& v : t) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(h.points.size());
        h.points.push_back(pts[v]);
      }
      v = remap[v];
    }
    h.triangles.push_back(t);
  }
  return h;
}

Polytope::Polytope(int dim, const std::vector<VecX>& points) : dim_(dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("Polytope: dimension must be 1, 2 or 3");
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("Polytope: point of the wrong dimension");
  if (points.empty()) return;

  const double eps = 1e-12 * extent(points);
  VecX center = VecX::Zero(dim);
  for (const auto& p : points) center += p;
  center /= static_cast<double>(points.size());
  MatX m(dim, points.size());
  for (std::size_t i = 0; i < points.size(); ++i) m.col(i) = points[i] - center;
  Eigen::JacobiSVD<MatX> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e3 * eps * std::sqrt(static_cast<double>(points.size()))) ++r;
  affine_dim_ = r;

  if (r == 0) {
    vertices_ = {points.front()};
    return;
  }
  const MatX basis = svd.matrixU().leftCols(r);
  if (r == 1) {
    std::size_t lo = 0, hi = 0;
    double vlo = 1e300, vhi = -1e300;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double t = basis.col(0).dot(points[i] - center);
      if (t < vlo) vlo = t, lo = i;
      if (t > vhi) vhi = t, hi = i;
    }
    vertices_ = {points[lo], points[hi]};
    if (dim == 1 && vertices_[0](0) > vertices_[1](0)) std::swap(vertices_[0], vertices_[1]);
    return;
  }
  if (r == 2) {
    std::vector<Eigen::Vector2d> q(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (dim == 2) q[i] = points[i];
      else q[i] = basis.transpose() * (points[i] - center);
    }
    for (int i : hull2_indices(q, eps)) vertices_.push_back(points[i]);
    return;
  }
  std::vector<Eigen::Vector3d> q(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) q[i] = points[i];
  const Hull3 h = convex_hull3(q);
  for (const auto& p : h.points) vertices_.push_back(p);
}

Polytope Polytope::point(const VecX& p) { return Polytope(static_cast<int>(p.size()), {p}); }

Polytope Polytope::interval(double a, double b) {
  return Polytope(1, {VecX::Constant(1, a), VecX::Constant(1, b)});
}

Polytope Polytope::box(const VecX& lo, const VecX& hi) {
  const int d = static_cast<int>(lo.size());
  std::vector<VecX> pts;
  for (int mask = 0; mask < (1 << d); ++mask) {
    VecX p(d);
    for (int i = 0; i < d; ++i) p(i) = (mask >> i & 1) ? hi(i) : lo(i);
    pts.push_back(p);
  }
  return Polytope(d, pts);
}

Polytope Polytope::from_planar(const PlanarBody& body) {
  std::vector<VecX> pts;
  for (const auto& v : body.vertices()) pts.push_back(Eigen::Vector2d(v.x, v.y));
  return Polytope(2, pts);
}

double Polytope::volume() const {
  if (affine_dim_ < dim_) return 0.0;
  if (dim_ == 1) return vertices_[1](0) - vertices_[0](0);
  if (dim_ == 2) {
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < vertices_.size(); ++i)
      s += triangle_area2(vertices_[0], vertices_[i], vertices_[i + 1]);
    return 0.5 * s;
  }
  std::vector<Eigen::Vector3d> q(vertices_.begin(), vertices_.end());
  return convex_hull3(q).volume();
}

double Polytope::diameter() const {
  double d = 0.0;
  for (const auto& a : vertices_)
    for (const auto& b : vertices_) d = std::max(d, (a - b).norm());
  return d;
}

PlanarBody Polytope::to_planar() const {
  if (dim_ != 2) throw std::invalid_argument("Polytope::to_planar: not a planar polytope");
  if (empty()) throw std::invalid_argument("Polytope::to_planar: empty polytope");
  std::vector<Vec2> v;
  for (const auto& p : vertices_) v.push_back({p(0), p(1)});
  if (v.size() == 1) return PlanarBody::point(v[0]);
  if (v.size() == 2) return PlanarBody::segment(v[0], v[1]);
  return PlanarBody::polygon(std::move(v));
}

Polytope linear_image(const Polytope& k, const MatX& m) {
  if (m.cols() != k.dim()) throw std::invalid_argument("linear_image: matrix does not match the polytope dimension");
  std::vector<VecX> pts;
  for (const auto& v : k.vertices()) pts.push_back(m * v);
  return Polytope(static_cast<int>(m.rows()), pts);
}

Polytope minkowski_sum(const Polytope& a, const Polytope& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("minkowski_sum: dimension mismatch");
  std::vector<VecX> pts;
  pts.reserve(a.vertices().size() * b.vertices().size());
  for (const auto& u : a.vertices())
    for (const auto& v : b.vertices()) pts.push_back(u + v);
  return Polytope(a.dim(), pts);
}

Polytope scale(const Polytope& a, double s) {
  std::vector<VecX> pts;
  for (const auto& v : a.vertices()) pts.push_back(s * v);
  return Polytope(a.dim(), pts);
}

Polytope translate(const Polytope& a, const VecX& t) {
  std::vector<VecX> pts;
  for (const auto& v : a.vertices()) pts.push_back(v + t);
  return Polytope(a.dim(), pts);
}

Polytope cartesian_product(const Polytope& a, const Polytope& b) {
  const int d = a.dim() + b.dim();
  if (d > 3) throw std::invalid_argument("cartesian_product: total dimension exceeds 3");
  std::vector<VecX> pts;
  for (const auto& u : a.vertices())
    for (const auto& v : b.vertices()) {
      VecX p(d);
      p << u, v;
      pts.push_back(p);
    }
  return Polytope(d, pts);
}

Polytope slice(const Polytope& k, const VecX& normal, double offset) {
  const auto& v = k.vertices();
  const double eps = 1e-12 * extent(v) * std::max(1.0, normal.norm());
  std::vector<double> s(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) s[i] = normal.dot(v[i]) - offset;
  std::vector<VecX> pts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(s[i]) <= eps) pts.push_back(v[i]);
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if ((s[i] > eps && s[j] < -eps) || (s[i] < -eps && s[j] > eps))
        pts.push_back(v[i] + (s[i] / (s[i] - s[j])) * (v[j] - v[i]));
  }
  return Polytope(k.dim(), pts);
}

Polytope random_polytope(std::mt19937_64& rng, int dim, int n_points) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MatX shape(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) shape(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * g(rng);
  VecX shift(dim);
  for (int i = 0; i < dim; ++i) shift(i) = 2.0 * u(rng) - 1.0;
  std::vector<VecX> pts;
  for (int i = 0; i < n_points; ++i) {
    VecX x(dim);
    for (int j = 0; j < dim; ++j) x(j) = g(rng);
    x *= (0.8 + 0.2 * u(rng)) / x.norm();
    pts.push_back(shape * x + shift);
  }
  return Polytope(dim, pts);
}

namespace {

std::vector<VecX> fibonacci_sphere(int n, double r) {
  std::vector<VecX> pts;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(1.0 - z * z);
    pts.push_back(Eigen::Vector3d(r * rho * std::cos(golden * i), r * rho * std::sin(golden * i), r * z));
  }
  return pts;
}

}  // namespace

std::vector<Polytope> probe_family(int dim, unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Polytope> out;
  if (dim == 1) {
    out.push_back(Polytope::interval(0.0, 1.0));
    out.push_back(Polytope::interval(-0.5, 2.0));
    out.push_back(Polytope::point(VecX::Constant(1, 0.3)));
    while (static_cast<int>(out.size()) < count) {
      const double a = 2.0 * u(rng) - 1.0;
      out.push_back(Polytope::interval(a, a + 0.1 + 2.0 * u(rng)));
    }
  } else if (dim == 2) {
    out.push_back(Polytope::box(VecX::Zero(2), VecX::Ones(2)));
    out.push_back(Polytope::from_planar(PlanarBody::regular_polygon(64, 1.0, 0.01)));
    out.push_back(Polytope::from_planar(PlanarBody::segment({-0.5, 0.2}, {0.7, 1.1})));
    for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
      if (i % 2 == 0) {
        out.push_back(Polytope::from_planar(random_polygon(rng)));
      } else {
        const auto smooth = random_smooth_body(rng, 8);
        const auto samples = smooth.support_fn().sample(48);
        out.push_back(Polytope::from_planar(from_support_samples(samples)));
      }
    }
  } else if (dim == 3) {
    out.push_back(Polytope::box(VecX::Zero(3), VecX::Ones(3)));
    out.push_back(Polytope(3, fibonacci_sphere(42, 1.0)));
    out.push_back(Polytope(3, {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0.5, 0), Eigen::Vector3d(0.2, 1, 0)}));
    out.push_back(Polytope(3, {Eigen::Vector3d(0.1, -0.3, 0.2), Eigen::Vector3d(0.8, 0.4, -0.5)}));
    while (static_cast<int>(out.size()) < count) out.push_back(random_polytope(rng, 3, 6 + static_cast<int>(u(rng) * 8)));
  } else {
    throw std::invalid_argument("probe_family: dimension must be 1, 2 or 3");
  }
  out.erase(out.begin() + std::min<std::size_t>(count, out.size()), out.end());
  return out;
}

}  // namespace valf

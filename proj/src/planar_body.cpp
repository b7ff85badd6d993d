#include "valf/planar_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace valf {
namespace {

double normalize_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

double scale_of(const std::vector<Vec2>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return std::max(s, 1.0);
}

// Andrew's monotone chain; drops collinear and repeated points.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  if (pts.empty()) throw std::invalid_argument("convex_hull: no points");
  const double eps = 1e-12 * scale_of(pts);
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Vec2> uniq;
  for (const auto& p : pts) {
    if (uniq.empty() || std::hypot(p.x - uniq.back().x, p.y - uniq.back().y) > eps)
      uniq.push_back(p);
  }
  if (uniq.size() <= 2) {
    if (uniq.size() == 2 && std::hypot(uniq[1].x - uniq[0].x, uniq[1].y - uniq[0].y) <= eps)
      uniq.pop_back();
    return uniq;
  }
  std::vector<Vec2> h(2 * uniq.size());
  std::size_t k = 0;
  auto turn = [&](Vec2 o, Vec2 a, Vec2 b) { return cross(a - o, b - o); };
  for (const auto& p : uniq) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], p) <= eps * std::hypot(p.x - h[k - 2].x, p.y - h[k - 2].y)) --k;
    h[k++] = p;
  }
  for (std::size_t i = uniq.size() - 1, t = k + 1; i-- > 0;) {
    const Vec2 p = uniq[i];
    while (k >= t && turn(h[k - 2], h[k - 1], p) <= eps * std::hypot(p.x - h[k - 2].x, p.y - h[k - 2].y)) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  return h;
}

Vec2 unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

std::vector<AreaMeasure1::Atom> polygon_atoms(const std::vector<Vec2>& v) {
  std::vector<AreaMeasure1::Atom> atoms;
  if (v.size() < 2) return atoms;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 d = v[(i + 1) % v.size()] - v[i];
    const double len = std::hypot(d.x, d.y);
    atoms.push_back({normalize_angle(std::atan2(-d.x, d.y)), len});
  }
  return atoms;
}

bool is_orthogonal(const Mat2& g) {
  return std::abs(g[0] * g[0] + g[2] * g[2] - 1.0) < 1e-12 &&
         std::abs(g[1] * g[1] + g[3] * g[3] - 1.0) < 1e-12 &&
         std::abs(g[0] * g[1] + g[2] * g[3]) < 1e-12;
}

}  // namespace

Mat2 rotation(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return {c, -s, s, c};
}

double AreaMeasure1::total_mass() const {
  double m = density.integral();
  for (const auto& a : atoms) m += a.mass;
  return m;
}

double AreaMeasure1::integrate(const TrigPoly& g) const {
  double s = inner(g, density);
  for (const auto& a : atoms) s += a.mass * g(a.angle);
  return s;
}

std::array<double, 2> AreaMeasure1::centroid() const {
  std::array<double, 2> c{kPi * density.a(1), kPi * density.b(1)};
  for (const auto& a : atoms) {
    c[0] += a.mass * std::cos(a.angle);
    c[1] += a.mass * std::sin(a.angle);
  }
  return c;
}

PlanarBody PlanarBody::support(TrigPoly h, double tol) {
  const TrigPoly r = h.plus_second_derivative();
  const std::size_t grid = std::max<std::size_t>(4096, 16 * (h.band_limit() + 1));
  for (double v : r.sample(grid)) {
    if (v < -tol)
      throw std::invalid_argument("PlanarBody::support: h + h'' is negative; body is not convex");
  }
  return PlanarBody(SupportFn{std::move(h)});
}

PlanarBody PlanarBody::polygon(std::vector<Vec2> v) {
  if (v.empty()) throw std::invalid_argument("PlanarBody::polygon: no vertices");
  const double eps = 1e-12 * scale_of(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (std::hypot(v[i].x - v[j].x, v[i].y - v[j].y) <= eps)
        throw std::invalid_argument("PlanarBody::polygon: repeated vertex");
    }
  }
  if (v.size() >= 3) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 a = v[i];
      const Vec2 b = v[(i + 1) % v.size()];
      const Vec2 c = v[(i + 2) % v.size()];
      if (cross(b - a, c - b) <= eps)
        throw std::invalid_argument("PlanarBody::polygon: vertices not strictly convex and counterclockwise");
    }
    double turning = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 d0 = v[(i + 1) % v.size()] - v[i];
      const Vec2 d1 = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
      turning += std::atan2(cross(d0, d1), dot(d0, d1));
    }
    if (std::abs(turning - kTwoPi) > 1e-6)
      throw std::invalid_argument("PlanarBody::polygon: vertices wind more than once");
  }
  return PlanarBody(Polygon{std::move(v)});
}

PlanarBody PlanarBody::hull(std::vector<Vec2> points) {
  return PlanarBody(Polygon{convex_hull(std::move(points))});
}

PlanarBody PlanarBody::point(Vec2 p) { return PlanarBody(Polygon{{p}}); }

PlanarBody PlanarBody::segment(Vec2 p, Vec2 q) { return hull({p, q}); }

PlanarBody PlanarBody::disc(double radius, Vec2 center) {
  if (radius < 0.0) throw std::invalid_argument("PlanarBody::disc: negative radius");
  TrigPoly h(1);
  h.set_a(0, radius);
  h.set_a(1, center.x);
  h.set_b(1, center.y);
  return PlanarBody(SupportFn{std::move(h)});
}

PlanarBody PlanarBody::square(double side) {
  return polygon({{0, 0}, {side, 0}, {side, side}, {0, side}});
}

PlanarBody PlanarBody::regular_polygon(int n, double r, double phase) {
  std::vector<Vec2> v;
  for (int i = 0; i < n; ++i) v.push_back(r * unit(phase + kTwoPi * i / n));
  return polygon(std::move(v));
}

const TrigPoly& PlanarBody::support_fn() const {
  if (!is_support()) throw std::logic_error("PlanarBody: not a support-function body");
  return std::get<SupportFn>(rep_).h;
}

const std::vector<Vec2>& PlanarBody::vertices() const {
  if (!is_polygon()) throw std::logic_error("PlanarBody: not a polygon");
  return std::get<Polygon>(rep_).vertices;
}

double PlanarBody::support_at(double theta) const {
  if (is_support()) return support_fn()(theta);
  const Vec2 u = unit(theta);
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : vertices()) m = std::max(m, dot(p, u));
  return m;
}

PlanarBody minkowski_sum(const PlanarBody& a, const PlanarBody& b) {
  const bool approx = a.approximate() || b.approximate();
  if (a.is_support() && b.is_support())
    return PlanarBody(SupportFn{a.support_fn() + b.support_fn()}, approx);
  if (a.is_polygon() && b.is_polygon()) {
    // Edge merge: walk both boundaries in order of edge direction.
    auto lowest = [](const std::vector<Vec2>& v) {
      return static_cast<std::size_t>(std::min_element(v.begin(), v.end(), [](Vec2 p, Vec2 q) {
               return p.y < q.y || (p.y == q.y && p.x < q.x);
             }) - v.begin());
    };
    struct Edge {
      double angle;
      Vec2 d;
    };
    std::vector<Edge> edges;
    auto collect = [&edges](const std::vector<Vec2>& v, std::size_t start) {
      if (v.size() < 2) return;
      for (std::size_t k = 0; k < v.size(); ++k) {
        const std::size_t i = (start + k) % v.size();
        const Vec2 d = v[(i + 1) % v.size()] - v[i];
        edges.push_back({normalize_angle(std::atan2(d.y, d.x)), d});
      }
    };
    const auto& va = a.vertices();
    const auto& vb = b.vertices();
    const std::size_t la = lowest(va);
    const std::size_t lb = lowest(vb);
    collect(va, la);
    collect(vb, lb);
    std::stable_sort(edges.begin(), edges.end(),
                     [](const Edge& p, const Edge& q) { return p.angle < q.angle; });
    std::vector<Vec2> out{va[la] + vb[lb]};
    for (const auto& e : edges) out.push_back(out.back() + e.d);
    out.pop_back();
    return PlanarBody(Polygon{convex_hull(std::move(out))}, approx);
  }
  std::vector<double> samples(kDefaultGridSize);
  for (int j = 0; j < kDefaultGridSize; ++j) {
    const double t = kTwoPi * j / kDefaultGridSize;
    samples[j] = a.support_at(t) + b.support_at(t);
  }
  return from_support_samples(samples);
}

PlanarBody from_support_samples(std::span<const double> h) {
  const std::size_t m = h.size();
  if (m < 3) throw std::invalid_argument("from_support_samples: need at least 3 samples");
  std::vector<Vec2> pts;
  pts.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t0 = kTwoPi * j / m;
    const double t1 = kTwoPi * ((j + 1) % m) / m;
    const Vec2 u0 = unit(t0);
    const Vec2 u1 = unit(t1);
    const double det = cross(u0, u1);
    const double h0 = h[j];
    const double h1 = h[(j + 1) % m];
    pts.push_back({(h0 * u1.y - h1 * u0.y) / det, (u0.x * h1 - u1.x * h0) / det});
  }
  return PlanarBody(Polygon{convex_hull(std::move(pts))}, true);
}

double area(const PlanarBody& a) {
  if (a.is_support()) {
    const auto& h = a.support_fn();
    return 0.5 * inner(h, h.plus_second_derivative());
  }
  const auto& v = a.vertices();
  if (v.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

double perimeter(const PlanarBody& a) { return area_measure(a).total_mass(); }

AreaMeasure1 area_measure(const PlanarBody& a) {
  if (a.is_support()) return {a.support_fn().plus_second_derivative(), {}};
  return {TrigPoly(0), polygon_atoms(a.vertices())};
}

double mixed_volume(const PlanarBody& a, const PlanarBody& b) {
  // Atoms make the integral a finite sum whenever either body is a polygon.
  if (b.is_polygon()) {
    double s = 0.0;
    for (const auto& at : polygon_atoms(b.vertices())) s += at.mass * a.support_at(at.angle);
    return 0.5 * s;
  }
  if (a.is_polygon()) return mixed_volume(b, a);
  return 0.5 * inner(a.support_fn(), b.support_fn().plus_second_derivative());
}

PlanarBody transform_body(const PlanarBody& a, const Mat2& g) {
  const double det = g[0] * g[3] - g[1] * g[2];
  if (std::abs(det) < 1e-14) throw std::invalid_argument("transform_body: singular matrix");
  if (a.is_polygon()) {
    std::vector<Vec2> v;
    for (const auto& p : a.vertices())
      v.push_back({g[0] * p.x + g[1] * p.y, g[2] * p.x + g[3] * p.y});
    return PlanarBody(Polygon{convex_hull(std::move(v))}, a.approximate());
  }
  const TrigPoly& h = a.support_fn();
  if (is_orthogonal(g)) {
    const double alpha = std::atan2(g[2], g[0]);
    if (det > 0) return PlanarBody(SupportFn{h.shifted(-alpha)}, a.approximate());
    // g = R_α·diag(1,−1): h_{gA}(θ) = h_A(α − θ).
    return PlanarBody(SupportFn{h.shifted(alpha).mirrored()}, a.approximate());
  }
  // h_{gA}(u) = h_A(gᵀu) = |gᵀu| h_A(gᵀu/|gᵀu|).
  std::vector<double> samples(kDefaultGridSize);
  for (int j = 0; j < kDefaultGridSize; ++j) {
    const Vec2 u = unit(kTwoPi * j / kDefaultGridSize);
    const Vec2 w{g[0] * u.x + g[2] * u.y, g[1] * u.x + g[3] * u.y};
    samples[j] = std::hypot(w.x, w.y) * h(std::atan2(w.y, w.x));
  }
  const int n = std::max(h.band_limit(), kDefaultBandLimit);
  return PlanarBody(SupportFn{TrigPoly::fit_samples(samples, n)}, true);
}

PlanarBody reflect(const PlanarBody& a) { return transform_body(a, {-1, 0, 0, -1}); }

PlanarBody rotate(const PlanarBody& a, double alpha) { return transform_body(a, rotation(alpha)); }

PlanarBody translate(const PlanarBody& a, Vec2 t) {
  if (a.is_support()) return minkowski_sum(a, PlanarBody::disc(0.0, t));
  return minkowski_sum(a, PlanarBody::point(t));
}

TrigPoly support_coefficients(const PlanarBody& a, int band_limit) {
  if (a.is_support()) return a.support_fn().with_band_limit(band_limit);
  const auto& v = a.vertices();
  // ∫_α^β cos mθ and ∫_α^β sin mθ.
  auto icos = [](int m, double al, double be) {
    return m == 0 ? be - al : (std::sin(m * be) - std::sin(m * al)) / m;
  };
  auto isin = [](int m, double al, double be) {
    return m == 0 ? 0.0 : (std::cos(m * al) - std::cos(m * be)) / m;
  };
  struct Arc {
    Vec2 p;
    double from;
    double to;
  };
  std::vector<Arc> arcs;
  if (v.size() == 1) {
    arcs.push_back({v[0], 0.0, kTwoPi});
  } else {
    const auto atoms = polygon_atoms(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double from = atoms[(i + v.size() - 1) % v.size()].angle;
      double to = atoms[i].angle;
      while (to <= from) to += kTwoPi;
      arcs.push_back({v[i], from, to});
    }
  }
  TrigPoly h(band_limit);
  for (int k = 0; k <= band_limit; ++k) {
    double ca = 0.0;
    double sb = 0.0;
    for (const auto& arc : arcs) {
      const double al = arc.from;
      const double be = arc.to;
      // h = x cos θ + y sin θ on the arc.
      ca += arc.p.x * 0.5 * (icos(k - 1, al, be) + icos(k + 1, al, be)) +
            arc.p.y * 0.5 * (isin(k + 1, al, be) - isin(k - 1, al, be));
      if (k >= 1) {
        sb += arc.p.x * 0.5 * (isin(k + 1, al, be) + isin(k - 1, al, be)) +
              arc.p.y * 0.5 * (icos(k - 1, al, be) - icos(k + 1, al, be));
      }
    }
    h.set_a(k, (k == 0 ? 1.0 / kTwoPi : 1.0 / kPi) * ca);
    if (k >= 1) h.set_b(k, sb / kPi);
  }
  return h;
}

double width(const PlanarBody& a, Vec2 dir) {
  const double t = std::atan2(dir.y, dir.x);
  return a.support_at(t) + a.support_at(t + kPi);
}

PlanarBody random_smooth_body(std::mt19937_64& rng, int band_limit) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigPoly h(std::max(band_limit, 1));
  h.set_a(0, 1.0);
  h.set_a(1, 0.5 * u(rng));
  h.set_b(1, 0.5 * u(rng));
  double weight = 0.0;
  for (int k = 2; k <= band_limit; ++k) {
    const double decay = 1.0 / (double(k) * k * k);
    const double ca = u(rng) * decay;
    const double cb = u(rng) * decay;
    h.set_a(k, ca);
    h.set_b(k, cb);
    weight += double(k) * k * (std::abs(ca) + std::abs(cb));
  }
  if (weight > 0.0) {
    const double target = 0.8 * (0.3 + 0.7 * (0.5 * (u(rng) + 1.0)));
    const double s = target / weight;
    for (int k = 2; k <= band_limit; ++k) {
      h.set_a(k, h.a(k) * s);
      h.set_b(k, h.b(k) * s);
    }
  }
  return PlanarBody::support(std::move(h));
}

PlanarBody random_polygon(std::mt19937_64& rng, int max_vertices) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 3 + static_cast<int>(u(rng) * (max_vertices - 2));
  const double rx = 0.5 + u(rng);
  const double ry = 0.5 + u(rng);
  const double tilt = kTwoPi * u(rng);
  const Vec2 c{u(rng) - 0.5, u(rng) - 0.5};
  std::vector<double> angles(n);
  for (auto& t : angles) t = kTwoPi * u(rng);
  std::sort(angles.begin(), angles.end());
  std::vector<Vec2> pts;
  for (double t : angles) {
    const Vec2 e{rx * std::cos(t), ry * std::sin(t)};
    pts.push_back(c + Vec2{std::cos(tilt) * e.x - std::sin(tilt) * e.y,
                           std::sin(tilt) * e.x + std::cos(tilt) * e.y});
  }
  auto body = PlanarBody::hull(std::move(pts));
  if (body.vertices().size() < 3) return PlanarBody::regular_polygon(3, 1.0, tilt);
  return body;
}

}  // namespace valf

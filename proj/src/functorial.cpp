#include "valf/functorial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "valf/numerics.hpp"

namespace valf {

namespace {

constexpr double kRankTol = 1e-12;

double product_of_singular_values(const MatX& m) {
  Eigen::JacobiSVD<MatX> svd(m);
  double p = 1.0;
  for (int i = 0; i < svd.singularValues().size(); ++i) p *= svd.singularValues()(i);
  return p;
}

std::string dims(int a, int b) { return std::to_string(a) + " vs " + std::to_string(b); }

}  // namespace

LinearMap::LinearMap(MatX matrix) : m_(std::move(matrix)) {
  if (m_.rows() < 1 || m_.cols() < 1 || m_.rows() > 6 || m_.cols() > 6)
    throw std::invalid_argument("LinearMap: dimensions must be between 1 and 6");
  svd_.compute(m_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd_.singularValues();
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * std::max(1.0, sv(0))) ++rank_;
}

LinearMap LinearMap::from_rows(int rows, int cols, const std::vector<double>& data) {
  if (rows < 1 || cols < 1 || static_cast<int>(data.size()) != rows * cols)
    throw std::invalid_argument("LinearMap::from_rows: data size does not match rows×cols");
  MatX m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = data[i * cols + j];
  return LinearMap(m);
}

MatX LinearMap::kernel_basis() const { return svd_.matrixV().rightCols(cols() - rank_); }
MatX LinearMap::image_basis() const { return svd_.matrixU().leftCols(rank_); }
MatX LinearMap::complement_basis() const { return svd_.matrixU().rightCols(rows() - rank_); }

MatX LinearMap::pseudo_inverse() const {
  MatX sinv = MatX::Zero(cols(), rows());
  for (int i = 0; i < rank_; ++i) sinv(i, i) = 1.0 / svd_.singularValues()(i);
  return svd_.matrixV() * sinv * svd_.matrixU().transpose();
}

std::pair<LinearMap, LinearMap> LinearMap::factorization() const {
  if (rank_ == 0) throw std::invalid_argument("LinearMap::factorization: zero map");
  const MatX sigma = svd_.singularValues().head(rank_).asDiagonal();
  MatX p = sigma * svd_.matrixV().leftCols(rank_).transpose();
  MatX j = svd_.matrixU().leftCols(rank_);
  return {LinearMap(std::move(p)), LinearMap(std::move(j))};
}

LinearMap compose(const LinearMap& f, const LinearMap& g) {
  if (f.cols() != g.rows()) throw std::invalid_argument("compose: dimension mismatch " + dims(f.cols(), g.rows()));
  return LinearMap(f.matrix() * g.matrix());
}

MeasureValuation::MeasureValuation(int dim, std::vector<MeasureTerm> terms) : dim_(dim), terms_(std::move(terms)) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("MeasureValuation: dimension must be 1, 2 or 3");
  for (const auto& t : terms_) {
    if (const auto* p = std::get_if<Polytope>(&t.body)) {
      if (p->dim() != dim || p->empty()) throw std::invalid_argument("MeasureValuation: term body of the wrong dimension");
    } else if (dim != 2 || !std::get<PlanarBody>(t.body).is_support()) {
      throw std::invalid_argument("MeasureValuation: support-function bodies are planar only");
    }
  }
}

MeasureValuation MeasureValuation::volume(int dim) { return of_body(Polytope::point(VecX::Zero(dim))); }

MeasureValuation MeasureValuation::of_body(Polytope a, double c) {
  const int d = a.dim();
  return MeasureValuation(d, {{c, std::move(a)}});
}

MeasureValuation MeasureValuation::of_body(PlanarBody a, double c) {
  if (a.is_polygon()) return of_body(Polytope::from_planar(a), c);
  return MeasureValuation(2, {{c, std::move(a)}});
}

double MeasureValuation::operator()(const Polytope& k) const {
  if (k.empty()) return 0.0;
  if (k.dim() != dim_) throw std::invalid_argument("MeasureValuation: body dimension " + dims(k.dim(), dim_));
  double s = 0.0;
  for (const auto& t : terms_) {
    if (const auto* p = std::get_if<Polytope>(&t.body)) s += t.c * minkowski_sum(k, *p).volume();
    else s += t.c * evaluate(from_body_measure(std::get<PlanarBody>(t.body)), k.to_planar());
  }
  return s;
}

MeasureValuation& MeasureValuation::operator+=(const MeasureValuation& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("MeasureValuation: sum of different dimensions");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

MeasureValuation operator*(double s, MeasureValuation a) {
  for (auto& t : a.terms_) t.c *= s;
  return a;
}

NumericValuation as_numeric(const MeasureValuation& phi) {
  return {phi.dim(), [phi](const Polytope& k) { return phi(k); }, phi.dim()};
}

NumericValuation as_numeric(const Valuation2& phi) {
  return {2, [phi](const Polytope& k) { return k.empty() ? 0.0 : evaluate(phi, k.to_planar()); }, 2};
}

double Valuation1::operator()(const Polytope& k) const {
  if (k.dim() != 1) throw std::invalid_argument("Valuation1: body is not one-dimensional");
  return k.empty() ? 0.0 : c0 + c1 * k.volume();
}

double Valuation1::max_coeff_diff(const Valuation1& o) const {
  return std::max(std::abs(c0 - o.c0), std::abs(c1 - o.c1));
}

Valuation1 to_valuation1(const MeasureValuation& phi) {
  if (phi.dim() != 1) throw std::invalid_argument("to_valuation1: not one-dimensional");
  Valuation1 v;
  for (const auto& t : phi.terms()) {
    v.c0 += t.c * std::get<Polytope>(t.body).volume();
    v.c1 += t.c;
  }
  return v;
}

Valuation1 to_valuation1(const NumericValuation& phi) {
  if (phi.dim != 1) throw std::invalid_argument("to_valuation1: not one-dimensional");
  const double c0 = phi(Polytope::interval(0.0, 0.0));
  return {c0, phi(Polytope::interval(0.0, 1.0)) - c0};
}

Valuation1 product(const Valuation1& a, const Valuation1& b) { return {a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0}; }
Valuation1 convolve(const Valuation1& a, const Valuation1& b) { return {a.c0 * b.c1 + a.c1 * b.c0, a.c1 * b.c1}; }
Valuation1 fourier(const Valuation1& a) { return {a.c1, a.c0}; }

NumericValuation pullback(const LinearMap& f, const NumericValuation& phi) {
  if (phi.dim != f.rows()) throw std::invalid_argument("pullback: valuation lives in dimension " + dims(phi.dim, f.rows()));
  const MatX m = f.matrix();
  return {f.cols(), [m, phi](const Polytope& k) { return phi(linear_image(k, m)); },
          std::min(phi.degree_bound, f.cols())};
}

NumericValuation pullback(const LinearMap& f, const MeasureValuation& phi) { return pullback(f, as_numeric(phi)); }

MeasureValuation pushforward_symbolic(const LinearMap& p, const MeasureValuation& phi) {
  if (phi.dim() != p.cols()) throw std::invalid_argument("pushforward: valuation lives in dimension " + dims(phi.dim(), p.cols()));
  if (!p.is_surjective()) throw std::invalid_argument("pushforward_symbolic: map is not onto");
  std::vector<MeasureTerm> terms;
  for (const auto& t : phi.terms()) {
    if (const auto* a = std::get_if<Polytope>(&t.body)) {
      terms.push_back({t.c, linear_image(*a, p.matrix())});
      continue;
    }
    const auto& a = std::get<PlanarBody>(t.body);
    const MatX& m = p.matrix();
    if (p.rows() == 1) {
      // p(A) = [−h_A(−v), h_A(v)] for the row vector v.
      const double len = std::hypot(m(0, 0), m(0, 1));
      const double ang = std::atan2(m(0, 1), m(0, 0));
      terms.push_back({t.c, Polytope::interval(-len * a.support_at(ang + kPi), len * a.support_at(ang))});
    } else {
      terms.push_back({t.c, transform_body(a, Mat2{m(0, 0), m(0, 1), m(1, 0), m(1, 1)})});
    }
  }
  return MeasureValuation(p.rows(), std::move(terms));
}

NumericValuation pushforward_surjective(const LinearMap& p, const NumericValuation& phi, const PushforwardOptions& opt) {
  if (phi.dim != p.cols()) throw std::invalid_argument("pushforward: valuation lives in dimension " + dims(phi.dim, p.cols()));
  if (!p.is_surjective()) throw std::invalid_argument("pushforward_surjective: map is not onto");
  const int n = p.cols();
  const int k = n - p.rank();
  const MatX section = opt.section.size() ? opt.section : p.pseudo_inverse();
  if (section.rows() != n || section.cols() != p.rows() ||
      (p.matrix() * section - MatX::Identity(p.rows(), p.rows())).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("pushforward_surjective: section is not a right inverse");
  const double jac = product_of_singular_values(p.matrix());
  const double tol = opt.fit_tolerance;
  if (k == 0) {
    return {p.rows(), [phi, section, jac](const Polytope& x) { return jac * phi(linear_image(x, section)); },
            phi.degree_bound};
  }
  const MatX ker = p.kernel_basis();
  std::vector<VecX> corners;
  for (int mask = 0; mask < (1 << k); ++mask) {
    VecX c = VecX::Zero(n);
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) c += ker.col(i);
    corners.push_back(c);
  }
  const Polytope cube(n, corners);
  const int degree = phi.degree_bound;
  auto eval = [phi, section, jac, cube, k, degree, tol](const Polytope& x) {
    if (x.empty()) return 0.0;
    if (k > degree) return 0.0;
    const Polytope lifted = linear_image(x, section);
    const double h = 0.5 * std::max(1.0, lifted.diameter());
    std::vector<double> eps, vals;
    for (int i = 0; i <= degree + 1; ++i) {
      eps.push_back(i * h);
      vals.push_back(phi(minkowski_sum(lifted, scale(cube, i * h))));
    }
    const PolyFit fit = polyfit(eps, vals, degree);
    if (fit.relative_residual > tol)
      throw std::runtime_error("pushforward: ε ↦ φ(K + εS) is not polynomial of degree " + std::to_string(degree) +
                               " (relative residual " + std::to_string(fit.relative_residual) + ")");
    return jac * fit.coeffs(k);
  };
  return {p.rows(), eval, std::max(0, degree - k)};
}

namespace {

double fiber_integral(const Polytope& body, const MatX& normals, int level, const NumericValuation& phi,
                      const MatX& pinv, const GaussRule& rule) {
  if (body.empty()) return 0.0;
  if (level == normals.cols()) return phi(linear_image(body, pinv));
  const VecX c = normals.col(level);
  std::vector<double> t;
  for (const auto& v : body.vertices()) t.push_back(c.dot(v));
  std::sort(t.begin(), t.end());
  const double span = t.back() - t.front();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double a = t[i];
    const double b = t[i + 1];
    if (b - a <= 1e-13 * std::max(1.0, span)) continue;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = mid + half * rule.nodes[q];
      total += half * rule.weights[q] * fiber_integral(slice(body, c, s), normals, level + 1, phi, pinv, rule);
    }
  }
  return total;
}

}  // namespace

NumericValuation pushforward_injective(const LinearMap& j, const NumericValuation& phi, const PushforwardOptions& opt) {
  if (phi.dim != j.cols()) throw std::invalid_argument("pushforward: valuation lives in dimension " + dims(phi.dim, j.cols()));
  if (!j.is_injective()) throw std::invalid_argument("pushforward_injective: map is not injective");
  const MatX normals = j.complement_basis();
  const MatX pinv = j.pseudo_inverse();
  const double gram = product_of_singular_values(j.matrix());
  const int nodes = opt.fiber_nodes;
  auto eval = [phi, normals, pinv, gram, nodes](const Polytope& k) {
    return gram * fiber_integral(k, normals, 0, phi, pinv, gauss_legendre(nodes));
  };
  return {j.rows(), eval, phi.degree_bound + static_cast<int>(normals.cols())};
}

NumericValuation pushforward_factored(const LinearMap& p, const LinearMap& j, const NumericValuation& phi,
                                     const PushforwardOptions& opt) {
  if (p.rows() != j.cols()) throw std::invalid_argument("pushforward_factored: factors do not compose");
  return pushforward_injective(j, pushforward_surjective(p, phi, opt), opt);
}

NumericValuation pushforward(const LinearMap& f, const NumericValuation& phi, const PushforwardOptions& opt) {
  if (f.is_surjective()) return pushforward_surjective(f, phi, opt);
  if (f.is_injective()) return pushforward_injective(f, phi, opt);
  const auto [p, j] = f.factorization();
  return pushforward_factored(p, j, phi, opt);
}

NumericValuation pushforward(const LinearMap& f, const MeasureValuation& phi, const PushforwardOptions& opt) {
  if (f.is_surjective()) return as_numeric(pushforward_symbolic(f, phi));
  if (f.is_injective()) return pushforward_injective(f, as_numeric(phi), opt);
  const auto [p, j] = f.factorization();
  return pushforward_injective(j, as_numeric(pushforward_symbolic(p, phi)), opt);
}

MeasureValuation exterior_product(const MeasureValuation& phi, const MeasureValuation& psi) {
  const int d = phi.dim() + psi.dim();
  if (d > 3) throw std::invalid_argument("exterior_product: total dimension " + std::to_string(d) + " exceeds 3");
  std::vector<MeasureTerm> terms;
  for (const auto& a : phi.terms())
    for (const auto& b : psi.terms()) {
      const auto* pa = std::get_if<Polytope>(&a.body);
      const auto* pb = std::get_if<Polytope>(&b.body);
      if (!pa || !pb) throw std::invalid_argument("exterior_product: needs polytope term bodies");
      terms.push_back({a.c * b.c, cartesian_product(*pa, *pb)});
    }
  return MeasureValuation(d, std::move(terms));
}

NumericValuation product_via_diagonal(const MeasureValuation& phi, const MeasureValuation& psi) {
  if (phi.dim() != 1 || psi.dim() != 1) throw std::invalid_argument("product_via_diagonal: both factors must live on R¹");
  return pullback(LinearMap(MatX::Ones(2, 1)), exterior_product(phi, psi));
}

MeasureValuation convolution_via_addition(const MeasureValuation& phi, const MeasureValuation& psi) {
  if (phi.dim() != psi.dim()) throw std::invalid_argument("convolution: dimension " + dims(phi.dim(), psi.dim()));
  std::vector<MeasureTerm> terms;
  for (const auto& a : phi.terms())
    for (const auto& b : psi.terms()) {
      const auto* pa = std::get_if<Polytope>(&a.body);
      const auto* pb = std::get_if<Polytope>(&b.body);
      if (pa && pb) terms.push_back({a.c * b.c, minkowski_sum(*pa, *pb)});
      else if (!pa && !pb)
        terms.push_back({a.c * b.c, minkowski_sum(std::get<PlanarBody>(a.body), std::get<PlanarBody>(b.body))});
      else throw std::invalid_argument("convolution: cannot mix polytope and support-function terms");
    }
  return MeasureValuation(phi.dim(), std::move(terms));
}

NumericValuation convolution_via_addition_numeric(const MeasureValuation& phi, const MeasureValuation& psi) {
  if (phi.dim() != 1 || psi.dim() != 1) throw std::invalid_argument("convolution: numeric addition map needs R¹ factors");
  return pushforward_surjective(LinearMap(MatX::Ones(1, 2)), as_numeric(exterior_product(phi, psi)));
}

MeasureValuation convolve(const MeasureValuation& phi, const MeasureValuation& psi) {
  return convolution_via_addition(phi, psi);
}

CartesianSquare fiber_square(const LinearMap& f, const LinearMap& g) {
  if (f.rows() != g.rows()) throw std::invalid_argument("fiber_square: f and g must share a target");
  const int dx = f.cols();
  const int dyt = g.cols();
  MatX m(f.rows(), dx + dyt);
  m << f.matrix(), -g.matrix();
  const LinearMap mm(m);
  if (!mm.is_surjective()) throw std::invalid_argument("fiber_square: f ⊕ g is not onto");
  const MatX q = mm.kernel_basis();
  if (q.cols() < 1 || q.cols() > 3) throw std::invalid_argument("fiber_square: fiber product has dimension outside 1–3");
  return {f, g, LinearMap(q.bottomRows(dyt)), LinearMap(q.topRows(dx)), product_of_singular_values(m)};
}

double commutativity_defect(const CartesianSquare& sq) {
  return (sq.g.matrix() * sq.f_tilde.matrix() - sq.f.matrix() * sq.g_tilde.matrix()).cwiseAbs().maxCoeff();
}

double base_change_residual(const CartesianSquare& sq, const NumericValuation& phi, const std::vector<Polytope>& probes) {
  const auto lhs = pullback(sq.g, pushforward(sq.f, phi));
  const auto rhs = pushforward(sq.f_tilde, pullback(sq.g_tilde, phi));
  double r = 0.0;
  for (const auto& k : probes) r = std::max(r, std::abs(lhs(k) - sq.density_factor * rhs(k)));
  return r;
}

double base_change2_residual(const CartesianSquare& sq, const NumericValuation& psi,
                             const std::vector<Polytope>& probes) {
  const auto lhs = pullback(sq.f, pushforward(sq.g, psi));
  const auto rhs = pushforward(sq.g_tilde, pullback(sq.f_tilde, psi));
  double r = 0.0;
  for (const auto& k : probes) r = std::max(r, std::abs(lhs(k) - sq.density_factor * rhs(k)));
  return r;
}

double pushforward_convolution_residual(const LinearMap& p, const MeasureValuation& phi, const MeasureValuation& psi,
                                        const std::vector<Polytope>& probes) {
  const auto lhs = pushforward_symbolic(p, convolve(phi, psi));
  const auto rhs = convolve(pushforward_symbolic(p, phi), pushforward_symbolic(p, psi));
  double r = 0.0;
  for (const auto& k : probes) r = std::max(r, std::abs(lhs(k) - rhs(k)));
  return r;
}

double steiner_top_coefficient(const Polytope& a, const Polytope& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("steiner_top_coefficient: dimension mismatch");
  const int d = a.dim();
  const int k = b.affine_dim();
  const double h = 0.5 * std::max(1.0, a.diameter());
  std::vector<double> eps, vals;
  for (int i = 0; i <= d + 1; ++i) {
    eps.push_back(i * h);
    vals.push_back(minkowski_sum(a, scale(b, i * h)).volume());
  }
  return polyfit(eps, vals, d).coeffs(k);
}

double kernel_volume_product(const LinearMap& p, const Polytope& a, const Polytope& b) {
  if (!p.is_surjective()) throw std::invalid_argument("kernel_volume_product: map is not onto");
  const MatX ker = p.kernel_basis();
  const int k = static_cast<int>(ker.cols());
  if (k == 0) throw std::invalid_argument("kernel_volume_product: trivial kernel");
  const VecX base = b.vertices().front();
  std::vector<VecX> coords;
  for (const auto& v : b.vertices()) {
    if ((p.matrix() * (v - base)).norm() > 1e-9 * std::max(1.0, b.diameter()))
      throw std::invalid_argument("kernel_volume_product: B does not lie in a translate of the kernel");
    coords.push_back(ker.transpose() * (v - base));
  }
  const double vol_b = Polytope(k, coords).volume();
  return vol_b * linear_image(a, p.matrix()).volume() / product_of_singular_values(p.matrix());
}

double max_residual(const NumericValuation& phi, const NumericValuation& psi, const std::vector<Polytope>& probes) {
  double r = 0.0;
  for (const auto& k : probes) r = std::max(r, std::abs(phi(k) - psi(k)));
  return r;
}

}  // namespace valf

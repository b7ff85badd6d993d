#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "valf/polytope.hpp"
#include "valf/valuation2.hpp"

namespace valf {

/// Linear map Rⁿ → Rᵐ given by an m×n matrix.
class LinearMap {
public:
  explicit LinearMap(MatX matrix);
  /// Row-major data, as in the JSON map format.
  static LinearMap from_rows(int rows, int cols, const std::vector<double>& data);
  static LinearMap identity(int n) { return LinearMap(MatX::Identity(n, n)); }

  const MatX& matrix() const { return m_; }
  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  int rank() const { return rank_; }
  bool is_surjective() const { return rank_ == rows(); }
  bool is_injective() const { return rank_ == cols(); }
  /// Orthonormal bases, from the SVD.
  MatX kernel_basis() const;
  MatX image_basis() const;
  MatX complement_basis() const;  // orthonormal basis of Im(f)^⊥
  /// Moore–Penrose pseudo-inverse.
  MatX pseudo_inverse() const;

  /// f = j∘p with p: Rⁿ → R^r onto and j: R^r → Rᵐ into, r = rank; p = Σ Vᵀ
  /// and j = U from the thin SVD.
  std::pair<LinearMap, LinearMap> factorization() const;

private:
  MatX m_;
  int rank_ = 0;
  Eigen::JacobiSVD<MatX> svd_;
};

/// (f ∘ g) as a LinearMap.
LinearMap compose(const LinearMap& f, const LinearMap& g);

/// A term body of a measure-type valuation: a polytope, or in dimension 2 a
/// support-function body (kept exact through evaluation and projection to lines).
using TermBody = std::variant<Polytope, PlanarBody>;

struct MeasureTerm {
  double c;
  TermBody body;
};

/// K ↦ Σ c_i vol(K + A_i) in dimension 1, 2 or 3.
class MeasureValuation {
public:
  explicit MeasureValuation(int dim, std::vector<MeasureTerm> terms = {});
  /// vol(• + A) with A a single point.
  static MeasureValuation volume(int dim);
  static MeasureValuation of_body(Polytope a, double c = 1.0);
  static MeasureValuation of_body(PlanarBody a, double c = 1.0);

  int dim() const { return dim_; }
  const std::vector<MeasureTerm>& terms() const { return terms_; }
  double operator()(const Polytope& k) const;

  MeasureValuation& operator+=(const MeasureValuation& o);
  friend MeasureValuation operator+(MeasureValuation a, const MeasureValuation& b) { return a += b; }
  friend MeasureValuation operator*(double s, MeasureValuation a);

private:
  int dim_;
  std::vector<MeasureTerm> terms_;
};

/// A valuation known only through its values on polytopes. `degree_bound`
/// bounds the degree of ε ↦ φ(K + εS) and is at most `dim`.
struct NumericValuation {
  int dim = 0;
  std::function<double(const Polytope&)> eval;
  int degree_bound = 0;

  double operator()(const Polytope& k) const { return eval(k); }
};

NumericValuation as_numeric(const MeasureValuation& phi);
NumericValuation as_numeric(const Valuation2& phi);

/// Valuation on R¹: c0·χ + c1·length.
struct Valuation1 {
  double c0 = 0.0;
  double c1 = 0.0;

  double operator()(const Polytope& k) const;
  double max_coeff_diff(const Valuation1& o) const;
};
/// Exact for measure-type input: vol(• + A) = |A|·χ + vol.
Valuation1 to_valuation1(const MeasureValuation& phi);
/// Reads off (φ(pt), φ([0,1]) − φ(pt)); valid for any translation-invariant φ on R¹.
Valuation1 to_valuation1(const NumericValuation& phi);
/// χ is the unit; vol·vol = 0.
Valuation1 product(const Valuation1& a, const Valuation1& b);
/// vol is the unit; χ∗χ = 0.
Valuation1 convolve(const Valuation1& a, const Valuation1& b);
/// χ ↔ vol.
Valuation1 fourier(const Valuation1& a);

/// K ↦ φ(f(K)).
NumericValuation pullback(const LinearMap& f, const NumericValuation& phi);
NumericValuation pullback(const LinearMap& f, const MeasureValuation& phi);

/// Surjection: terms (c, p(A)). Throws unless p is onto.
MeasureValuation pushforward_symbolic(const LinearMap& p, const MeasureValuation& phi);

struct PushforwardOptions {
  /// Optional section s with p∘s = id; the pseudo-inverse when empty.
  MatX section;
  /// Gauss–Legendre nodes per breakpoint interval of the fiber integral.
  int fiber_nodes = 5;
  /// Relative residual above which a non-polynomial input is reported.
  double fit_tolerance = 1e-7;
};

/// Surjection with kernel of dimension k:
///   K ↦ J·(1/k!)·dᵏ/dεᵏ|₀ φ(s(K) + εS),
/// S the unit cube on an orthonormal kernel basis and J = √det(p pᵀ).
NumericValuation pushforward_surjective(const LinearMap& p, const NumericValuation& phi,
                                        const PushforwardOptions& opt = {});
/// Injection: K ↦ G·∫ φ(j⁺(K ∩ (Im j + t))) dt over t ∈ (Im j)^⊥, G = √det(jᵀj).
/// Integrated exactly by Gauss–Legendre between the projections of the vertices.
NumericValuation pushforward_injective(const LinearMap& j, const NumericValuation& phi,
                                       const PushforwardOptions& opt = {});
/// General f through its factorization j∘p (or through `factors` if given).
NumericValuation pushforward(const LinearMap& f, const NumericValuation& phi, const PushforwardOptions& opt = {});
/// Symbolic surjection step, then the fiber integral for the injective part.
NumericValuation pushforward(const LinearMap& f, const MeasureValuation& phi, const PushforwardOptions& opt = {});
NumericValuation pushforward_factored(const LinearMap& p, const LinearMap& j, const NumericValuation& phi,
                                     const PushforwardOptions& opt = {});

/// (φ ⊠ ψ): terms (c·c′, A × B). Total dimension at most 3.
MeasureValuation exterior_product(const MeasureValuation& phi, const MeasureValuation& psi);
/// K ↦ (φ ⊠ ψ)(ΔK), Δ the diagonal R¹ → R².
NumericValuation product_via_diagonal(const MeasureValuation& phi, const MeasureValuation& psi);
/// a_*(φ ⊠ ψ) through a(A × B) = A + B: terms (c·c′, A + B).
MeasureValuation convolution_via_addition(const MeasureValuation& phi, const MeasureValuation& psi);
/// a_*(φ ⊠ ψ) computed numerically along the addition map R¹ × R¹ → R¹.
NumericValuation convolution_via_addition_numeric(const MeasureValuation& phi, const MeasureValuation& psi);

/// Fiber-product square
///   X̃ --f̃--> Ỹ
///   |g̃        |g
///   X  --f--> Y
/// with X̃ = ker[f, −g] on an orthonormal basis. `density_factor` J = √det(M Mᵀ),
/// M = [f, −g], makes g*f_* = J·f̃_*g̃* and f*g_* = J·g̃_*f̃*.
struct CartesianSquare {
  LinearMap f, g, f_tilde, g_tilde;
  double density_factor = 1.0;
};

/// Throws std::invalid_argument unless f ⊕ g is onto and X̃ has dimension 1–3.
CartesianSquare fiber_square(const LinearMap& f, const LinearMap& g);
/// Commutativity defect max |g f̃ − f g̃|.
double commutativity_defect(const CartesianSquare& sq);
/// sup over probes of |g*(f_*φ) − J·f̃_*(g̃*φ)|, φ on X.
double base_change_residual(const CartesianSquare& sq, const NumericValuation& phi, const std::vector<Polytope>& probes);
/// sup over probes of |f*(g_*ψ) − J·g̃_*(f̃*ψ)|, ψ on Ỹ.
double base_change2_residual(const CartesianSquare& sq, const NumericValuation& psi,
                             const std::vector<Polytope>& probes);

MeasureValuation convolve(const MeasureValuation& phi, const MeasureValuation& psi);
/// sup over probes of |p_*(φ∗ψ) − p_*φ ∗ p_*ψ| with both sides symbolic.
double pushforward_convolution_residual(const LinearMap& p, const MeasureValuation& phi, const MeasureValuation& psi,
                                        const std::vector<Polytope>& probes);

/// (1/k!)·dᵏ/dεᵏ|₀ vol(A + εB), k = affine dimension of B, from an exact
/// polynomial fit in ε.
double steiner_top_coefficient(const Polytope& a, const Polytope& b);
/// Right side of the projection-derivative identity for a surjection p and a
/// body B in ker p: vol_k(B)·vol(p(A))/√det(p pᵀ).
double kernel_volume_product(const LinearMap& p, const Polytope& a, const Polytope& b);

/// sup over probes of |φ(K) − ψ(K)|.
double max_residual(const NumericValuation& phi, const NumericValuation& psi, const std::vector<Polytope>& probes);

}  // namespace valf

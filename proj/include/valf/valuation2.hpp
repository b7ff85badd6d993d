#pragma once

#include <random>

#include "valf/planar_body.hpp"
#include "valf/trig_poly.hpp"

namespace valf {

/// Smooth translation-invariant valuation on R², graded by degree:
///   φ(K) = c0·χ(K) + ∫ f dS₁(K) + c2·area(K).
/// The degree-1 density is stored modulo first harmonics (they integrate to
/// zero against every area measure).
class Valuation2 {
public:
  Valuation2() = default;
  Valuation2(double c0, TrigPoly f, double c2);

  static Valuation2 euler_char() { return {1.0, TrigPoly(0), 0.0}; }
  static Valuation2 volume() { return {0.0, TrigPoly(0), 1.0}; }
  static Valuation2 degree1(TrigPoly f) { return {0.0, std::move(f), 0.0}; }
  /// First intrinsic volume V₁ = V(•, unit disc), density ½.
  static Valuation2 intrinsic1() { return degree1(TrigPoly::constant(0.5)); }

  double c0() const { return c0_; }
  const TrigPoly& f() const { return f_; }
  double c2() const { return c2_; }

  Valuation2 degree_part(int degree) const;
  /// Even (parity 0) or odd (parity 1) part; χ and vol are even.
  Valuation2 parity_part(int parity) const;

  /// Max over |Δc0|, |Δc2| and all density coefficients.
  double max_coeff_diff(const Valuation2& other) const;

  Valuation2& operator+=(const Valuation2& o);
  Valuation2& operator-=(const Valuation2& o);
  Valuation2& operator*=(double s);
  friend Valuation2 operator+(Valuation2 a, const Valuation2& b) { return a += b; }
  friend Valuation2 operator-(Valuation2 a, const Valuation2& b) { return a -= b; }
  friend Valuation2 operator*(double s, Valuation2 a) { return a *= s; }

private:
  double c0_ = 0.0;
  TrigPoly f_;
  double c2_ = 0.0;
};

/// K ↦ area(K + A) = area(A)·χ + 2V(K,A) + area(K).
Valuation2 from_body_measure(const PlanarBody& a);
/// K ↦ V(K, A).
Valuation2 mixed_valuation(const PlanarBody& a);
double evaluate(const Valuation2& phi, const PlanarBody& k);

/// ∫ f (g + g'') dθ: the degree-1 ⊗ degree-1 convolution pairing.
double convolution_pairing(const TrigPoly& f, const TrigPoly& g);
/// ∫ f(θ)(g + g'')(θ + π) dθ: the degree-1 ⊗ degree-1 product pairing.
double product_pairing(const TrigPoly& f, const TrigPoly& g);

/// Graded product with unit χ; vol·(degree ≥ 1) = 0.
Valuation2 product(const Valuation2& phi, const Valuation2& psi);
/// Graded convolution with unit vol; deg(φ∗ψ) = deg φ + deg ψ − 2.
Valuation2 convolve(const Valuation2& phi, const Valuation2& psi);
/// Convolution on the transform side with the orientation line made
/// explicit: equals `convolve` except that the odd⊗odd degree-1 pairing
/// carries a sign. `fourier` maps `product` onto this operation.
Valuation2 convolve_oriented(const Valuation2& phi, const Valuation2& psi);

/// (c0, f, c2) ↦ (c2, f(· + π/2), c0); quarter turn J counterclockwise.
Valuation2 fourier(const Valuation2& phi);
Valuation2 fourier_inverse(const Valuation2& phi);
/// (Eφ)(K) = φ(−K).
Valuation2 euler(const Valuation2& phi);
/// (Λφ)(K) = d/dε φ(K + εD) at ε = 0, D the unit disc.
Valuation2 lambda_op(const Valuation2& phi);
Valuation2 mult_by_V1(const Valuation2& phi);
/// (gφ)(K) = φ(g⁻¹K) for g the rotation by α.
Valuation2 rotate_action(const Valuation2& phi, double alpha);

/// Random band-limited valuation; density coefficients decay like k⁻².
Valuation2 random_valuation(std::mt19937_64& rng, int band_limit);

}  // namespace valf

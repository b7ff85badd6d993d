#include "valf/valuation2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace valf {

Valuation2::Valuation2(double c0, TrigPoly f, double c2)
    : c0_(c0), f_(f.without_first_harmonics()), c2_(c2) {}

Valuation2 Valuation2::degree_part(int degree) const {
  switch (degree) {
    case 0: return {c0_, TrigPoly(0), 0.0};
    case 1: return {0.0, f_, 0.0};
    case 2: return {0.0, TrigPoly(0), c2_};
    default: throw std::invalid_argument("Valuation2::degree_part: degree must be 0, 1 or 2");
  }
}

Valuation2 Valuation2::parity_part(int parity) const {
  if (parity % 2 == 0) return {c0_, f_.parity_part(0), c2_};
  return {0.0, f_.parity_part(1), 0.0};
}

double Valuation2::max_coeff_diff(const Valuation2& o) const {
  return std::max({std::abs(c0_ - o.c0_), std::abs(c2_ - o.c2_), f_.max_coeff_diff(o.f_)});
}

Valuation2& Valuation2::operator+=(const Valuation2& o) {
  c0_ += o.c0_;
  f_ += o.f_;
  c2_ += o.c2_;
  return *this;
}

Valuation2& Valuation2::operator-=(const Valuation2& o) {
  c0_ -= o.c0_;
  f_ -= o.f_;
  c2_ -= o.c2_;
  return *this;
}

Valuation2& Valuation2::operator*=(double s) {
  c0_ *= s;
  f_ *= s;
  c2_ *= s;
  return *this;
}

namespace {

TrigPoly density_of(const PlanarBody& a) {
  if (a.is_support()) return a.support_fn();
  // Polygon support functions are not band-limited: truncated series.
  return support_coefficients(a, kDefaultBandLimit);
}

}  // namespace

Valuation2 from_body_measure(const PlanarBody& a) {
  return {area(a), density_of(a), 1.0};
}

Valuation2 mixed_valuation(const PlanarBody& a) {
  return Valuation2::degree1(0.5 * density_of(a));
}

double evaluate(const Valuation2& phi, const PlanarBody& k) {
  return phi.c0() + area_measure(k).integrate(phi.f()) + phi.c2() * area(k);
}

double convolution_pairing(const TrigPoly& f, const TrigPoly& g) {
  return inner(f, g.plus_second_derivative());
}

double product_pairing(const TrigPoly& f, const TrigPoly& g) {
  return inner(f, g.plus_second_derivative().shifted(kPi));
}

Valuation2 product(const Valuation2& phi, const Valuation2& psi) {
  const double c0 = phi.c0() * psi.c0();
  TrigPoly f = phi.c0() * psi.f() + psi.c0() * phi.f();
  const double c2 = phi.c0() * psi.c2() + psi.c0() * phi.c2() + product_pairing(phi.f(), psi.f());
  return {c0, std::move(f), c2};
}

Valuation2 convolve(const Valuation2& phi, const Valuation2& psi) {
  const double c2 = phi.c2() * psi.c2();
  TrigPoly f = phi.c2() * psi.f() + psi.c2() * phi.f();
  const double c0 = phi.c2() * psi.c0() + psi.c2() * phi.c0() + convolution_pairing(phi.f(), psi.f());
  return {c0, std::move(f), c2};
}

Valuation2 convolve_oriented(const Valuation2& phi, const Valuation2& psi) {
  const Valuation2 base = convolve(phi, psi);
  const double odd = convolution_pairing(phi.f().parity_part(1), psi.f().parity_part(1));
  return base - Valuation2(2.0 * odd, TrigPoly(0), 0.0);
}

Valuation2 fourier(const Valuation2& phi) {
  return {phi.c2(), phi.f().shifted(kPi / 2), phi.c0()};
}

Valuation2 fourier_inverse(const Valuation2& phi) {
  return {phi.c2(), phi.f().shifted(-kPi / 2), phi.c0()};
}

Valuation2 euler(const Valuation2& phi) {
  return {phi.c0(), phi.f().shifted(kPi), phi.c2()};
}

Valuation2 lambda_op(const Valuation2& phi) {
  // d/dε area(K + εD) = perimeter(K) = ∫ 1 dS₁(K);
  // d/dε ∫ f dS₁(K + εD) = ∫ f dS₁(D) = ∫ f dθ.
  return {phi.f().integral(), TrigPoly::constant(phi.c2()), 0.0};
}

Valuation2 mult_by_V1(const Valuation2& phi) {
  return product(Valuation2::intrinsic1(), phi);
}

Valuation2 rotate_action(const Valuation2& phi, double alpha) {
  return {phi.c0(), phi.f().shifted(-alpha), phi.c2()};
}

Valuation2 random_valuation(std::mt19937_64& rng, int band_limit) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigPoly f(band_limit);
  f.set_a(0, u(rng));
  for (int k = 2; k <= band_limit; ++k) {
    f.set_a(k, u(rng) / (double(k) * k));
    f.set_b(k, u(rng) / (double(k) * k));
  }
  return {u(rng), std::move(f), u(rng)};
}

}  // namespace valf

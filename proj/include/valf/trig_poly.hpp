#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace valf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Band-limited real function on the circle,
///   f(θ) = a₀ + Σ_{k=1..N} (a_k cos kθ + b_k sin kθ).
/// Coefficients beyond the band limit read as zero.
class TrigPoly {
public:
  TrigPoly() : TrigPoly(0) {}
  explicit TrigPoly(int band_limit);
  /// `a` holds a₀..a_N, `b` holds b₁..b_N.
  TrigPoly(std::vector<double> a, std::vector<double> b);
  /// Cosine series only.
  explicit TrigPoly(std::vector<double> a) : TrigPoly(std::move(a), {}) {}

  static TrigPoly constant(double c);
  static TrigPoly cos_term(int k, double amplitude = 1.0, int band_limit = -1);
  static TrigPoly sin_term(int k, double amplitude = 1.0, int band_limit = -1);
  /// Least-squares (equivalently DFT) fit of uniform samples θ_j = 2πj/M.
  static TrigPoly fit_samples(std::span<const double> samples, int band_limit);

  int band_limit() const { return static_cast<int>(a_.size()) - 1; }
  double a(int k) const;
  double b(int k) const;
  void set_a(int k, double v);
  void set_b(int k, double v);

  double operator()(double theta) const;
  std::vector<double> sample(std::size_t count) const;

  TrigPoly with_band_limit(int band_limit) const;
  /// f''.
  TrigPoly second_derivative() const;
  /// f + f''; the planar curvature-radius operator.
  TrigPoly plus_second_derivative() const;
  /// θ ↦ f(θ + α).
  TrigPoly shifted(double alpha) const;
  /// θ ↦ f(−θ).
  TrigPoly mirrored() const;
  /// Pointwise product; band limit is the sum of the operands'.
  TrigPoly times(const TrigPoly& other) const;
  TrigPoly without_first_harmonics() const;
  /// Keeps harmonics with k even (parity = 0) or odd (parity = 1).
  TrigPoly parity_part(int parity) const;

  /// ∫₀^{2π} f dθ.
  double integral() const { return kTwoPi * a_[0]; }
  /// Max absolute coefficient difference.
  double max_coeff_diff(const TrigPoly& other) const;

  TrigPoly& operator+=(const TrigPoly& other);
  TrigPoly& operator-=(const TrigPoly& other);
  TrigPoly& operator*=(double s);

  friend TrigPoly operator+(TrigPoly lhs, const TrigPoly& rhs) { return lhs += rhs; }
  friend TrigPoly operator-(TrigPoly lhs, const TrigPoly& rhs) { return lhs -= rhs; }
  friend TrigPoly operator*(TrigPoly lhs, double s) { return lhs *= s; }
  friend TrigPoly operator*(double s, TrigPoly rhs) { return rhs *= s; }

  const std::vector<double>& a_coeffs() const { return a_; }
  /// b₁..b_N (b₀ is not stored externally).
  std::vector<double> b_coeffs() const;

private:
  std::vector<double> a_;  // a_[0..N]
  std::vector<double> b_;  // b_[0] unused, always 0
};

/// ∫₀^{2π} f g dθ, exact by orthogonality.
double inner(const TrigPoly& f, const TrigPoly& g);

}  // namespace valf

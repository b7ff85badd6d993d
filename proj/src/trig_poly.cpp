#include "valf/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace valf {

TrigPoly::TrigPoly(int band_limit) {
  if (band_limit < 0) throw std::invalid_argument("TrigPoly: negative band limit");
  a_.assign(band_limit + 1, 0.0);
  b_.assign(band_limit + 1, 0.0);
}

TrigPoly::TrigPoly(std::vector<double> a, std::vector<double> b) {
  if (a.empty()) a.push_back(0.0);
  const int n = std::max<int>(static_cast<int>(a.size()) - 1, static_cast<int>(b.size()));
  a_.assign(n + 1, 0.0);
  b_.assign(n + 1, 0.0);
  std::copy(a.begin(), a.end(), a_.begin());
  std::copy(b.begin(), b.end(), b_.begin() + 1);
}

TrigPoly TrigPoly::constant(double c) {
  TrigPoly p(0);
  p.a_[0] = c;
  return p;
}

TrigPoly TrigPoly::cos_term(int k, double amplitude, int band_limit) {
  TrigPoly p(std::max(k, band_limit));
  p.a_[k] = amplitude;
  return p;
}

TrigPoly TrigPoly::sin_term(int k, double amplitude, int band_limit) {
  if (k < 1) throw std::invalid_argument("TrigPoly::sin_term: k must be >= 1");
  TrigPoly p(std::max(k, band_limit));
  p.b_[k] = amplitude;
  return p;
}

TrigPoly TrigPoly::fit_samples(std::span<const double> samples, int band_limit) {
  const std::size_t m = samples.size();
  if (m < static_cast<std::size_t>(2 * band_limit + 1))
    throw std::invalid_argument("TrigPoly::fit_samples: too few samples for band limit");
  TrigPoly p(band_limit);
  for (int k = 0; k <= band_limit; ++k) {
    double sc = 0.0;
    double ss = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
      sc += samples[j] * std::cos(k * t);
      ss += samples[j] * std::sin(k * t);
    }
    const double md = static_cast<double>(m);
    // Nyquist harmonic (2k == m) is aliased with itself.
    const bool nyquist = 2 * static_cast<std::size_t>(k) == m;
    p.a_[k] = (k == 0 || nyquist) ? sc / md : 2.0 * sc / md;
    if (k > 0 && !nyquist) p.b_[k] = 2.0 * ss / md;
  }
  return p;
}

double TrigPoly::a(int k) const {
  return (k >= 0 && k <= band_limit()) ? a_[k] : 0.0;
}

double TrigPoly::b(int k) const {
  return (k >= 1 && k <= band_limit()) ? b_[k] : 0.0;
}

void TrigPoly::set_a(int k, double v) {
  if (k < 0) throw std::out_of_range("TrigPoly::set_a");
  if (k > band_limit()) *this = with_band_limit(k);
  a_[k] = v;
}

void TrigPoly::set_b(int k, double v) {
  if (k < 1) throw std::out_of_range("TrigPoly::set_b");
  if (k > band_limit()) *this = with_band_limit(k);
  b_[k] = v;
}

double TrigPoly::operator()(double theta) const {
  double s = a_[0];
  for (int k = 1; k <= band_limit(); ++k)
    s += a_[k] * std::cos(k * theta) + b_[k] * std::sin(k * theta);
  return s;
}

std::vector<double> TrigPoly::sample(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j)
    out[j] = (*this)(kTwoPi * static_cast<double>(j) / static_cast<double>(count));
  return out;
}

TrigPoly TrigPoly::with_band_limit(int n) const {
  TrigPoly p(n);
  for (int k = 0; k <= std::min(n, band_limit()); ++k) {
    p.a_[k] = a_[k];
    p.b_[k] = b_[k];
  }
  return p;
}

TrigPoly TrigPoly::second_derivative() const {
  TrigPoly p(band_limit());
  for (int k = 1; k <= band_limit(); ++k) {
    p.a_[k] = -double(k) * k * a_[k];
    p.b_[k] = -double(k) * k * b_[k];
  }
  return p;
}

TrigPoly TrigPoly::plus_second_derivative() const {
  TrigPoly p(band_limit());
  p.a_[0] = a_[0];
  for (int k = 1; k <= band_limit(); ++k) {
    const double s = 1.0 - double(k) * k;
    p.a_[k] = s * a_[k];
    p.b_[k] = s * b_[k];
  }
  return p;
}

TrigPoly TrigPoly::shifted(double alpha) const {
  TrigPoly p(band_limit());
  p.a_[0] = a_[0];
  for (int k = 1; k <= band_limit(); ++k) {
    // Exact values at quarter turns keep the Fourier suites machine-exact.
    double c = std::cos(k * alpha);
    double s = std::sin(k * alpha);
    const double q = k * alpha / (kPi / 2);
    if (std::abs(q - std::round(q)) < 1e-14 * std::max(1.0, std::abs(q))) {
      const long r = ((static_cast<long>(std::llround(q)) % 4) + 4) % 4;
      c = (r == 0) ? 1.0 : (r == 2) ? -1.0 : 0.0;
      s = (r == 1) ? 1.0 : (r == 3) ? -1.0 : 0.0;
    }
    p.a_[k] = a_[k] * c + b_[k] * s;
    p.b_[k] = -a_[k] * s + b_[k] * c;
  }
  return p;
}

TrigPoly TrigPoly::mirrored() const {
  TrigPoly p = *this;
  for (int k = 1; k <= band_limit(); ++k) p.b_[k] = -b_[k];
  return p;
}

TrigPoly TrigPoly::times(const TrigPoly& other) const {
  const int n = band_limit();
  const int m = other.band_limit();
  TrigPoly p(n + m);
  // cos j cos k = ½[cos(j−k) + cos(j+k)], etc. Index 0 carries the constant term.
  auto add_cos = [&p](int k, double v) {
    p.a_[std::abs(k)] += v;
  };
  auto add_sin = [&p](int k, double v) {
    if (k > 0) p.b_[k] += v;
    else if (k < 0) p.b_[-k] -= v;
  };
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= m; ++k) {
      const double aa = a_[j] * other.a_[k];
      const double bb = b_[j] * other.b_[k];
      const double ab = a_[j] * other.b_[k];
      const double ba = b_[j] * other.a_[k];
      if (aa != 0.0) {
        add_cos(j - k, 0.5 * aa);
        add_cos(j + k, 0.5 * aa);
      }
      if (bb != 0.0) {
        add_cos(j - k, 0.5 * bb);
        add_cos(j + k, -0.5 * bb);
      }
      if (ab != 0.0) {  // cos jθ sin kθ
        add_sin(j + k, 0.5 * ab);
        add_sin(k - j, 0.5 * ab);
      }
      if (ba != 0.0) {  // sin jθ cos kθ
        add_sin(j + k, 0.5 * ba);
        add_sin(j - k, 0.5 * ba);
      }
    }
  }
  return p;
}

TrigPoly TrigPoly::without_first_harmonics() const {
  TrigPoly p = *this;
  if (band_limit() >= 1) {
    p.a_[1] = 0.0;
    p.b_[1] = 0.0;
  }
  return p;
}

TrigPoly TrigPoly::parity_part(int parity) const {
  TrigPoly p(band_limit());
  for (int k = 0; k <= band_limit(); ++k) {
    if (k % 2 == parity % 2) {
      p.a_[k] = a_[k];
      p.b_[k] = b_[k];
    }
  }
  return p;
}

double TrigPoly::max_coeff_diff(const TrigPoly& other) const {
  const int n = std::max(band_limit(), other.band_limit());
  double d = 0.0;
  for (int k = 0; k <= n; ++k) {
    d = std::max(d, std::abs(a(k) - other.a(k)));
    d = std::max(d, std::abs(b(k) - other.b(k)));
  }
  return d;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& other) {
  if (other.band_limit() > band_limit()) *this = with_band_limit(other.band_limit());
  for (int k = 0; k <= other.band_limit(); ++k) {
    a_[k] += other.a_[k];
    b_[k] += other.b_[k];
  }
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& other) {
  if (other.band_limit() > band_limit()) *this = with_band_limit(other.band_limit());
  for (int k = 0; k <= other.band_limit(); ++k) {
    a_[k] -= other.a_[k];
    b_[k] -= other.b_[k];
  }
  return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
  for (auto& v : a_) v *= s;
  for (auto& v : b_) v *= s;
  return *this;
}

std::vector<double> TrigPoly::b_coeffs() const {
  return {b_.begin() + 1, b_.end()};
}

double inner(const TrigPoly& f, const TrigPoly& g) {
  const int n = std::min(f.band_limit(), g.band_limit());
  double s = kTwoPi * f.a(0) * g.a(0);
  for (int k = 1; k <= n; ++k) s += kPi * (f.a(k) * g.a(k) + f.b(k) * g.b(k));
  return s;
}

}  // namespace valf

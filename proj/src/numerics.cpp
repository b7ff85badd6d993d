#include "valf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace valf {

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    t(k, k - 1) = t(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  GaussRule rule;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    rule.weights.push_back(2.0 * v * v);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

PolyFit polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  const int n = static_cast<int>(x.size());
  if (n != static_cast<int>(y.size()) || n < degree + 1) throw std::invalid_argument("polyfit: too few samples");
  double xmax = 0.0;
  for (double v : x) xmax = std::max(xmax, std::abs(v));
  if (xmax == 0.0) xmax = 1.0;
  Eigen::MatrixXd v(n, degree + 1);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    double p = 1.0;
    for (int j = 0; j <= degree; ++j, p *= x[i] / xmax) v(i, j) = p;
    b(i) = y[i];
  }
  Eigen::VectorXd c = v.colPivHouseholderQr().solve(b);
  double scale = 1.0;
  for (double yi : y) scale = std::max(scale, std::abs(yi));
  PolyFit fit;
  fit.relative_residual = (v * c - b).cwiseAbs().maxCoeff() / scale;
  double s = 1.0;
  for (int j = 0; j <= degree; ++j, s /= xmax) c(j) *= s;
  fit.coeffs = c;
  return fit;
}

}  // namespace valf

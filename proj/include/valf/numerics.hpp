#pragma once

#include <Eigen/Dense>
#include <vector>

namespace valf {

struct GaussRule {
  std::vector<double> nodes;    // on [−1, 1]
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule (Golub–Welsch); exact to degree 2n − 1.
const GaussRule& gauss_legendre(int n);

struct PolyFit {
  Eigen::VectorXd coeffs;  // c_0 … c_degree
  /// max |fit − y| / max(1, max |y|) over the samples.
  double relative_residual = 0.0;
};

/// Least-squares polynomial fit of degree `degree`; the samples are rescaled
/// to [0, 1] internally for conditioning.
PolyFit polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);

}  // namespace valf

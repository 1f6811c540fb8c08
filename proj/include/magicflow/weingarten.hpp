#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "magicflow/permutation.hpp"
#include "magicflow/zfield.hpp"

namespace magicflow {

// G_{sigma,tau}(n) = n^{#(sigma^-1 tau)}
inline Eigen::MatrixXd gram_matrix(int n, const SymmetricGroupTable& table) {
  if (n < 2) throw UsageError("gram_matrix: n must be >= 2");
  const int q = table.order();
  Eigen::MatrixXd g(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      g(i, j) = std::pow(double(n), table.relative_cycles(i, j));
  return g;
}

// Wg(d^2) = G(d^2)^{-1}; requires d^2 >= D so the Gram matrix is invertible
inline Eigen::MatrixXd weingarten_matrix(int d, const SymmetricGroupTable& table) {
  if (d * d < table.D)
    throw UsageError("weingarten_matrix: d^2 < D, Gram matrix is singular");
  const Eigen::MatrixXd g = gram_matrix(d * d, table);
  const Eigen::MatrixXd wg = g.fullPivLu().inverse();
  const double residual =
      (wg * g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (residual > 1e-10)
    throw NumericalError("weingarten_matrix: inversion residual " + std::to_string(residual));
  return wg;
}

// (d^2 - 1)! / (d^2 + D - 1)!, the weight of the replica boundary state
inline double boundary_weight(int d, int D) {
  double w = 1.0;
  for (int j = 0; j < D; ++j) w /= static_cast<double>(d * d + j);
  return w;
}

}  // namespace magicflow

#pragma once

#include <Eigen/Dense>

#include "magicflow/pauli.hpp"
#include "magicflow/rng.hpp"

namespace magicflow {

// Haar-random unitary: complex Ginibre matrix, QR factorization, then the
// R-diagonal phases are pushed into Q. Without the phase fix QR alone is not
// Haar-distributed.
inline MatrixXcd random_haar_unitary(int dim, RngStream& rng) {
  if (dim < 1) throw UsageError("random_haar_unitary: dim must be >= 1");
  MatrixXcd g(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) {
      const double re = rng.next_gaussian();
      const double im = rng.next_gaussian();
      g(r, c) = Complex(re, im) * M_SQRT1_2;
    }
  Eigen::HouseholderQR<MatrixXcd> qr(g);
  MatrixXcd qmat = qr.householderQ();
  const MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    Complex diag = rmat(c, c);
    const double a = std::abs(diag);
    const Complex phase = a > 0 ? diag / a : Complex(1, 0);
    qmat.col(c) *= phase;
  }
  return qmat;
}

inline double unitarity_error(const MatrixXcd& u) {
  const MatrixXcd delta =
      u.adjoint() * u - MatrixXcd::Identity(u.rows(), u.cols());
  return delta.cwiseAbs().maxCoeff();
}

}  // namespace magicflow

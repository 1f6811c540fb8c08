#pragma once

#include <Eigen/Dense>
#include <vector>

#include "magicflow/css_exact.hpp"
#include "magicflow/defect.hpp"
#include "magicflow/rng.hpp"
#include "magicflow/statevector.hpp"

namespace magicflow {

// Matrix product state of physical dimension d; tensors[i][s] is the chiL x
// chiR matrix of site i at physical value s.
struct PhysicalMps {
  int d = 2;
  int N = 0;
  std::vector<std::vector<MatrixXcd>> tensors;

  static PhysicalMps product_state(int d, const std::vector<Eigen::VectorXcd>& amps) {
    PhysicalMps m;
    m.d = d;
    m.N = static_cast<int>(amps.size());
    for (const auto& a : amps) {
      if (a.size() != d) throw UsageError("PhysicalMps: site amplitude length != d");
      std::vector<MatrixXcd> site(d);
      for (int s = 0; s < d; ++s) site[s] = MatrixXcd::Constant(1, 1, a(s));
      m.tensors.push_back(std::move(site));
    }
    return m;
  }

  static PhysicalMps random(int d, int n, int chi, RngStream& rng) {
    PhysicalMps m;
    m.d = d;
    m.N = n;
    for (int i = 0; i < n; ++i) {
      const int l = i == 0 ? 1 : chi;
      const int r = i == n - 1 ? 1 : chi;
      std::vector<MatrixXcd> site(d, MatrixXcd(l, r));
      for (int s = 0; s < d; ++s)
        for (int cc = 0; cc < r; ++cc)
          for (int rr = 0; rr < l; ++rr)
            site[s](rr, cc) = Complex(rng.next_gaussian(), rng.next_gaussian());
      m.tensors.push_back(std::move(site));
    }
    m.normalize();
    return m;
  }

  double norm() const {
    MatrixXcd v = MatrixXcd::Identity(1, 1);
    for (int i = 0; i < N; ++i) {
      const int r = static_cast<int>(tensors[i][0].cols());
      MatrixXcd next = MatrixXcd::Zero(r, r);
      for (int s = 0; s < d; ++s) next += tensors[i][s].adjoint() * v * tensors[i][s];
      v.swap(next);
    }
    return std::sqrt(std::abs(v(0, 0).real()));
  }

  void normalize() {
    const double scale = std::pow(norm(), -1.0 / N);
    for (auto& site : tensors)
      for (auto& mat : site) mat *= scale;
    // distributing the scale can leave a small residue; absorb it at site 0
    const double rem = norm();
    for (auto& mat : tensors[0]) mat /= rem;
  }

  StateVector densify() const {
    if (N * std::log2(double(d)) > 20.0) throw ResourceError("PhysicalMps: densify too large");
    StateVector out = init_zero_state(d, N);
    const int64_t dim = out.dim();
    for (int64_t idx = 0; idx < dim; ++idx) {
      MatrixXcd v = MatrixXcd::Identity(1, 1);
      int64_t rest = idx;
      for (int i = 0; i < N; ++i) {
        const int64_t stride = ipow(d, N - 1 - i);
        v = v * tensors[i][static_cast<int>(rest / stride)];
        rest %= stride;
      }
      out.amp[idx] = v(0, 0);
    }
    return out;
  }
};

// Y_A via the replica MPS: factor r(A) = Gamma^dagger Gamma, build the k-fold
// site tensors B = Gamma (A_i)^{(x) k}, and take the norm of the result.
inline double css_entropy_mps(const PhysicalMps& mps, const DefectSubspace& a) {
  if (mps.d != a.d) throw UsageError("css_entropy_mps: dimension mismatch");
  const int k = a.k;
  const int64_t q = ipow(a.d, k);

  int chi_max = 1;
  for (const auto& site : mps.tensors)
    chi_max = std::max(chi_max, static_cast<int>(site[0].cols()));
  if (std::pow(double(chi_max), k) > 4096.0)
    throw ResourceError("css_entropy_mps: chi^k exceeds 4096");

  const Eigen::MatrixXd r = r_matrix(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
  if (eig.eigenvalues().minCoeff() < -1e-10)
    throw NumericalError("css_entropy_mps: r(A) has negative eigenvalues");
  std::vector<int> kept;
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) > 1e-12) kept.push_back(i);
  Eigen::MatrixXd gamma(kept.size(), q);
  for (size_t row = 0; row < kept.size(); ++row)
    gamma.row(row) =
        std::sqrt(eig.eigenvalues()(kept[row])) * eig.eigenvectors().col(kept[row]).transpose();

  double log_acc = 0;
  MatrixXcd v = MatrixXcd::Identity(1, 1);
  std::vector<int> digits(k);
  for (int i = 0; i < mps.N; ++i) {
    const auto& site = mps.tensors[i];
    const int chi_l = static_cast<int>(site[0].rows());
    const int chi_r = static_cast<int>(site[0].cols());
    int64_t bl = 1, br = 1;
    for (int j = 0; j < k; ++j) { bl *= chi_l; br *= chi_r; }

    std::vector<MatrixXcd> b(kept.size(), MatrixXcd::Zero(bl, br));
    for (int64_t code = 0; code < q; ++code) {
      int64_t rest = code;
      for (int j = 0; j < k; ++j) {
        digits[j] = static_cast<int>(rest % a.d);
        rest /= a.d;
      }
      MatrixXcd kronmat = MatrixXcd::Identity(1, 1);
      for (int j = 0; j < k; ++j) {
        const MatrixXcd& m = site[digits[j]];
        MatrixXcd out(kronmat.rows() * m.rows(), kronmat.cols() * m.cols());
        for (int rr = 0; rr < kronmat.rows(); ++rr)
          for (int cc = 0; cc < kronmat.cols(); ++cc)
            out.block(rr * m.rows(), cc * m.cols(), m.rows(), m.cols()) = kronmat(rr, cc) * m;
        kronmat.swap(out);
      }
      for (size_t alpha = 0; alpha < kept.size(); ++alpha)
        if (gamma(alpha, code) != 0.0) b[alpha] += gamma(alpha, code) * kronmat;
    }

    MatrixXcd next = MatrixXcd::Zero(br, br);
    for (const auto& mat : b) next += mat.adjoint() * v * mat;
    v.swap(next);
    const double mx = v.cwiseAbs().maxCoeff();
    if (mx <= 0 || !std::isfinite(mx))
      throw NumericalError("css_entropy_mps: transfer contraction degenerated");
    v /= mx;
    log_acc += std::log(mx);
  }
  const Complex upsilon = v(0, 0);
  if (std::abs(upsilon.imag()) > 1e-10 * std::abs(upsilon.real()) + 1e-12)
    throw NumericalError("css_entropy_mps: imaginary residue in Upsilon");
  if (upsilon.real() <= 0) throw NumericalError("css_entropy_mps: non-positive Upsilon");
  return -(log_acc + std::log(upsilon.real()));
}

}  // namespace magicflow

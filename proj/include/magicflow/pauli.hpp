#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "magicflow/errors.hpp"
#include "magicflow/zfield.hpp"

namespace magicflow {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;

inline Complex root_of_unity(int d, long long exponent) {
  const long long e = ((exponent % d) + d) % d;
  if (e == 0) return Complex(1, 0);
  if (2 * e == d) return Complex(-1, 0);
  if (4 * e == d) return Complex(0, 1);
  if (4 * e == 3LL * d) return Complex(0, -1);
  const double angle = 2.0 * M_PI * static_cast<double>(e) / d;
  return Complex(std::cos(angle), std::sin(angle));
}

// Pauli string over N qudits: Z exponents q, X exponents p, zero global phase,
// per-site factor order Z then X.
struct PauliString {
  int d = 2;
  std::vector<int> q;
  std::vector<int> p;

  PauliString(int d_, std::vector<int> q_, std::vector<int> p_)
      : d(d_), q(std::move(q_)), p(std::move(p_)) {
    require_prime(d);
    if (q.size() != p.size()) throw UsageError("pauli string: |q| != |p|");
    for (auto& v : q) v = ((v % d) + d) % d;
    for (auto& v : p) v = ((v % d) + d) % d;
  }

  int sites() const { return static_cast<int>(q.size()); }

  static PauliString identity(int d, int n) {
    return PauliString(d, std::vector<int>(n, 0), std::vector<int>(n, 0));
  }

  bool is_identity() const {
    for (int i = 0; i < sites(); ++i)
      if (q[i] != 0 || p[i] != 0) return false;
    return true;
  }
};

// single-site Z^q X^p
inline MatrixXcd pauli_matrix(int d, int q, int p) {
  require_prime(d);
  if (q < 0 || q >= d || p < 0 || p >= d) throw UsageError("pauli exponent out of [0, d)");
  MatrixXcd m = MatrixXcd::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    const int row = (col + p) % d;
    m(row, col) = root_of_unity(d, static_cast<long long>(q) * row);
  }
  return m;
}

// dense matrix of a Pauli string; site 0 is the leftmost (most significant) factor
inline MatrixXcd pauli_string_matrix(const PauliString& s) {
  const int n = s.sites();
  double bits = n * std::log2(static_cast<double>(s.d));
  if (bits > 24.0) throw ResourceError("pauli_string_matrix: d^N exceeds 2^24 entries");
  MatrixXcd m = MatrixXcd::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    const MatrixXcd site = pauli_matrix(s.d, s.q[i], s.p[i]);
    MatrixXcd out(m.rows() * s.d, m.cols() * s.d);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        out.block(r * s.d, c * s.d, s.d, s.d) = m(r, c) * site;
    m.swap(out);
  }
  return m;
}

}  // namespace magicflow

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "magicflow/pauli.hpp"
#include "magicflow/rng.hpp"
#include "magicflow/zfield.hpp"

namespace magicflow {

struct CliffordGenerators {
  MatrixXcd h;     // d x d
  MatrixXcd phase; // d x d
  MatrixXcd cadd;  // d^2 x d^2, control on the left site
};

inline CliffordGenerators clifford_generators(int d) {
  require_prime(d);
  CliffordGenerators g;
  g.h = MatrixXcd::Zero(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      g.h(m, n) = root_of_unity(d, static_cast<long long>(m) * n) / std::sqrt(double(d));

  g.phase = MatrixXcd::Zero(d, d);
  if (d == 2) {
    g.phase(0, 0) = Complex(1, 0);
    g.phase(1, 1) = Complex(0, 1);
  } else {
    const int half = mod_inverse(2, d);
    for (int m = 0; m < d; ++m)
      g.phase(m, m) = root_of_unity(d, static_cast<long long>(m) * (m - 1) * half);
  }

  g.cadd = MatrixXcd::Zero(d * d, d * d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      g.cadd(m * d + (m + n) % d, m * d + n) = Complex(1, 0);
  return g;
}

// T|m> = exp(-i pi m / 4)|m>, qubits only
inline MatrixXcd t_gate() {
  MatrixXcd t = MatrixXcd::Identity(2, 2);
  t(1, 1) = std::exp(Complex(0, -M_PI / 4));
  return t;
}

namespace detail {

inline MatrixXcd kron2(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// canonical representative modulo global phase: first entry of modulus > tol
// is rotated to the positive real axis
inline MatrixXcd phase_canonical(const MatrixXcd& u) {
  for (int c = 0; c < u.cols(); ++c)
    for (int r = 0; r < u.rows(); ++r) {
      const Complex v = u(r, c);
      if (std::abs(v) > 1e-8) return u * (std::conj(v) / std::abs(v));
    }
  return u;
}

inline std::string matrix_key(const MatrixXcd& u) {
  std::string key;
  key.reserve(static_cast<size_t>(u.size()) * 8);
  for (int c = 0; c < u.cols(); ++c)
    for (int r = 0; r < u.rows(); ++r) {
      const auto quantize = [](double x) {
        return static_cast<long long>(std::llround(x * 1e6));
      };
      long long re = quantize(u(r, c).real());
      long long im = quantize(u(r, c).imag());
      if (re == 0) re = 0;  // normalize -0
      if (im == 0) im = 0;
      key.append(reinterpret_cast<const char*>(&re), sizeof re);
      key.append(reinterpret_cast<const char*>(&im), sizeof im);
    }
  return key;
}

}  // namespace detail

// The full two-qubit Clifford group modulo global phase (11520 elements),
// enumerated once by closure over {H1, H2, P1, P2, CNOT} and cached.
class TwoQubitCliffordTable {
 public:
  static const TwoQubitCliffordTable& instance() {
    static TwoQubitCliffordTable table;
    return table;
  }

  size_t size() const { return elements_.size(); }
  const MatrixXcd& element(size_t i) const { return elements_[i]; }

  const MatrixXcd& sample(RngStream& rng) const {
    return elements_[rng.next_index(elements_.size())];
  }

 private:
  TwoQubitCliffordTable() {
    const auto gen = clifford_generators(2);
    const MatrixXcd id2 = MatrixXcd::Identity(2, 2);
    std::vector<MatrixXcd> gens = {
        detail::kron2(gen.h, id2),     detail::kron2(id2, gen.h),
        detail::kron2(gen.phase, id2), detail::kron2(id2, gen.phase),
        gen.cadd};

    std::unordered_map<std::string, size_t> seen;
    std::vector<MatrixXcd> frontier = {detail::phase_canonical(MatrixXcd::Identity(4, 4))};
    seen.emplace(detail::matrix_key(frontier[0]), 0);
    elements_.push_back(frontier[0]);
    while (!frontier.empty()) {
      std::vector<MatrixXcd> next;
      for (const auto& u : frontier)
        for (const auto& g : gens) {
          MatrixXcd v = detail::phase_canonical(g * u);
          auto key = detail::matrix_key(v);
          if (seen.emplace(std::move(key), elements_.size()).second) {
            elements_.push_back(v);
            next.push_back(std::move(v));
          }
        }
      frontier.swap(next);
    }
  }

  std::vector<MatrixXcd> elements_;
};

inline const MatrixXcd& sample_uniform_clifford2(RngStream& rng) {
  return TwoQubitCliffordTable::instance().sample(rng);
}

}  // namespace magicflow

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "magicflow/clifford.hpp"
#include "magicflow/haar_random.hpp"
#include "magicflow/pauli.hpp"
#include "magicflow/rng.hpp"
#include "magicflow/zfield.hpp"

namespace magicflow {

// Dense statevector over d^N amplitudes; site 0 is the most significant digit.
struct StateVector {
  int d = 2;
  int N = 0;
  std::vector<Complex> amp;

  int64_t dim() const { return static_cast<int64_t>(amp.size()); }

  double norm() const {
    double s = 0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
  }
};

inline StateVector init_zero_state(int d, int N) {
  require_prime(d);
  if (N < 1) throw UsageError("init_zero_state: N must be >= 1");
  if (N * std::log2(double(d)) > 28.0)
    throw ResourceError("init_zero_state: d^N exceeds 2^28 amplitudes");
  StateVector s;
  s.d = d;
  s.N = N;
  s.amp.assign(static_cast<size_t>(ipow(d, N)), Complex(0, 0));
  s.amp[0] = Complex(1, 0);
  return s;
}

// gate on the ordered pair (site, site+1); u is d^2 x d^2 with the left site
// as the more significant gate index
inline void apply_two_site_gate(StateVector& s, const MatrixXcd& u, int site) {
  const int d = s.d;
  if (site < 0 || site + 1 >= s.N) throw UsageError("apply_two_site_gate: site out of range");
  if (u.rows() != d * d || u.cols() != d * d)
    throw UsageError("apply_two_site_gate: gate dimension mismatch");
  const int64_t stride_hi = ipow(d, s.N - 1 - site);
  const int64_t stride_lo = stride_hi / d;
  const int dd = d * d;
  std::vector<Complex> in(dd), out(dd);
  const int64_t dim = s.dim();
  const int64_t block = stride_hi * d;  // span of the two-site digits
  for (int64_t base = 0; base < dim; base += block) {
    for (int64_t rest = 0; rest < stride_lo; ++rest) {
      const int64_t off = base + rest;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          in[a * d + b] = s.amp[off + a * stride_hi + b * stride_lo];
      for (int r = 0; r < dd; ++r) {
        Complex acc(0, 0);
        for (int c = 0; c < dd; ++c) acc += u(r, c) * in[c];
        out[r] = acc;
      }
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          s.amp[off + a * stride_hi + b * stride_lo] = out[a * d + b];
    }
  }
}

inline void apply_single_site_gate(StateVector& s, const MatrixXcd& u, int site) {
  const int d = s.d;
  if (site < 0 || site >= s.N) throw UsageError("apply_single_site_gate: site out of range");
  if (u.rows() != d || u.cols() != d)
    throw UsageError("apply_single_site_gate: gate dimension mismatch");
  const int64_t stride = ipow(d, s.N - 1 - site);
  const int64_t dim = s.dim();
  std::vector<Complex> in(d);
  for (int64_t base = 0; base < dim; base += stride * d) {
    for (int64_t rest = 0; rest < stride; ++rest) {
      const int64_t off = base + rest;
      for (int a = 0; a < d; ++a) in[a] = s.amp[off + a * stride];
      for (int r = 0; r < d; ++r) {
        Complex acc(0, 0);
        for (int c = 0; c < d; ++c) acc += u(r, c) * in[c];
        s.amp[off + r * stride] = acc;
      }
    }
  }
}

// <Psi| Z_q X_p |Psi> without materializing the operator
inline Complex pauli_expectation(const StateVector& s, const PauliString& str) {
  if (str.d != s.d || str.sites() != s.N)
    throw UsageError("pauli_expectation: state/string dimension mismatch");
  const int d = s.d;
  const int64_t dim = s.dim();
  // offset of m -> m + p (sitewise mod d) and phase q.(m + p) accumulated per site
  std::vector<Complex> omega(d);
  for (int j = 0; j < d; ++j) omega[j] = root_of_unity(d, j);
  Complex acc(0, 0);
  std::vector<int> digits(s.N, 0);
  for (int64_t m = 0; m < dim; ++m) {
    int64_t shifted = 0;
    long long phase = 0;
    int64_t rem = m;
    for (int i = 0; i < s.N; ++i) {
      const int64_t stride = ipow(d, s.N - 1 - i);
      const int digit = static_cast<int>(rem / stride);
      rem %= stride;
      const int moved = (digit + str.p[i]) % d;
      shifted += moved * stride;
      phase += static_cast<long long>(str.q[i]) * moved;
    }
    acc += s.amp[m] * omega[phase % d] * std::conj(s.amp[shifted]);
  }
  return acc;
}

struct CircuitSpec {
  int d = 2;
  int N = 4;       // even
  int depth = 1;   // t >= 0
  uint64_t seed = 0;
  int ensemble = 1;  // M >= 1

  void validate() const {
    require_prime(d);
    if (N < 2 || N % 2 != 0) throw UsageError("CircuitSpec: N must be even and >= 2");
    if (depth < 0) throw UsageError("CircuitSpec: depth must be >= 0");
    if (ensemble < 1) throw UsageError("CircuitSpec: ensemble size must be >= 1");
  }
};

struct DopedCliffordSpec {
  int N = 4;
  int depth = 1;
  int t_gates_per_layer = 1;
  uint64_t seed = 0;
  int ensemble = 1;

  void validate() const {
    if (N < 2 || N % 2 != 0) throw UsageError("DopedCliffordSpec: N must be even and >= 2");
    if (depth < 0 || t_gates_per_layer < 0) throw UsageError("DopedCliffordSpec: bad depth/T count");
    if (ensemble < 1) throw UsageError("DopedCliffordSpec: ensemble size must be >= 1");
  }
};

// one brick-wall layer; r is 1-based so odd r covers (0,1),(2,3),...
inline void apply_brickwall_layer(StateVector& s, int r, RngStream& rng) {
  const int start = (r % 2 == 1) ? 0 : 1;
  for (int i = start; i + 1 < s.N; i += 2) {
    const MatrixXcd u = random_haar_unitary(s.d * s.d, rng);
    apply_two_site_gate(s, u, i);
  }
}

inline StateVector run_brickwall(const CircuitSpec& spec, RngStream& rng) {
  spec.validate();
  StateVector s = init_zero_state(spec.d, spec.N);
  for (int r = 1; r <= spec.depth; ++r) apply_brickwall_layer(s, r, rng);
  return s;
}

// doped Clifford layer: brick-wall of uniform 2-qubit Cliffords, then T gates
// on uniformly random sites
inline void apply_doped_layer(StateVector& s, int r, int t_count, RngStream& rng) {
  const int start = (r % 2 == 1) ? 0 : 1;
  for (int i = start; i + 1 < s.N; i += 2)
    apply_two_site_gate(s, sample_uniform_clifford2(rng), i);
  const MatrixXcd t = t_gate();
  for (int k = 0; k < t_count; ++k)
    apply_single_site_gate(s, t, static_cast<int>(rng.next_index(s.N)));
}

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
  if (a.d != b.d) throw UsageError("tensor_product: dimension mismatch");
  StateVector out;
  out.d = a.d;
  out.N = a.N + b.N;
  out.amp.resize(static_cast<size_t>(a.dim() * b.dim()));
  for (int64_t i = 0; i < a.dim(); ++i)
    for (int64_t j = 0; j < b.dim(); ++j)
      out.amp[i * b.dim() + j] = a.amp[i] * b.amp[j];
  return out;
}

// |0..0> evolved by a global Haar unitary (the deep-circuit limit)
inline StateVector haar_random_state(int d, int N, RngStream& rng) {
  require_prime(d);
  if (N * std::log2(double(d)) > 14.0)
    throw ResourceError("haar_random_state: global unitary too large");
  StateVector s = init_zero_state(d, N);
  const MatrixXcd u = random_haar_unitary(static_cast<int>(s.dim()), rng);
  for (int64_t i = 0; i < s.dim(); ++i) s.amp[i] = u(i, 0);
  return s;
}

}  // namespace magicflow

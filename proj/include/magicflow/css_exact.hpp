#pragma once

#include <Eigen/Dense>
#include <vector>

#include "magicflow/defect.hpp"
#include "magicflow/statevector.hpp"

namespace magicflow {

// r(A) = |A| Q_A as a real 0/1 matrix: r[x, y] = [x in A_perp][x - y in A]
inline Eigen::MatrixXd r_matrix(const DefectSubspace& a) {
  const int64_t dim = ipow(a.d, a.k);
  if (dim > (1 << 14)) throw ResourceError("r_matrix: d^k exceeds 2^14");
  std::set<int64_t> in_a;
  for (const auto& e : a.elements) in_a.insert(defect_detail::encode(e, a.d));
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(dim, dim);
  for (int64_t x = 0; x < dim; ++x) {
    Vec xv = defect_detail::decode(x, a.d, a.k);
    bool perp = true;
    for (const auto& e : a.elements)
      if (defect_detail::dot_mod(xv, e, a.d) != 0) { perp = false; break; }
    if (!perp) continue;
    for (const auto& e : a.elements) {
      Vec yv(a.k);
      for (int i = 0; i < a.k; ++i) yv[i] = ((xv[i] - e[i]) % a.d + a.d) % a.d;
      r(x, defect_detail::encode(yv, a.d)) = 1.0;
    }
  }
  return r;
}

inline bool is_y_family(const DefectSubspace& a) {
  if (a.k != replica_count(a.d)) return false;
  if (a.size() != a.d) return false;
  for (const auto& e : a.elements) {
    for (int i = 1; i < a.k; ++i)
      if (e[i] != e[0]) return false;
  }
  return true;
}

namespace css_detail {

// in-place transform F[a] = sum_n omega^{a.n} x[n] over all N axes of length d
inline void fourier_all_axes(std::vector<Complex>& x, int d, int N) {
  const int64_t dim = static_cast<int64_t>(x.size());
  if (d == 2) {
    for (int64_t len = 1; len < dim; len <<= 1)
      for (int64_t i = 0; i < dim; i += len << 1)
        for (int64_t j = i; j < i + len; ++j) {
          const Complex a = x[j], b = x[j + len];
          x[j] = a + b;
          x[j + len] = a - b;
        }
    return;
  }
  std::vector<Complex> kernel(static_cast<size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      kernel[r * d + c] = root_of_unity(d, static_cast<long long>(r) * c);
  std::vector<Complex> tmp(d);
  for (int axis = 0; axis < N; ++axis) {
    const int64_t stride = ipow(d, axis);
    const int64_t block = stride * d;
    for (int64_t base = 0; base < dim; base += block)
      for (int64_t off = 0; off < stride; ++off) {
        for (int j = 0; j < d; ++j) tmp[j] = x[base + off + j * stride];
        for (int r = 0; r < d; ++r) {
          Complex acc(0, 0);
          for (int j = 0; j < d; ++j) acc += kernel[r * d + j] * tmp[j];
          x[base + off + r * stride] = acc;
        }
      }
  }
}

// index map n -> n (sitewise) minus p, for the shift register of X_p
inline void shifted_product(const StateVector& s, int64_t p_code,
                            std::vector<Complex>& out) {
  const int64_t dim = s.dim();
  const int d = s.d;
  if (d == 2) {
    for (int64_t n = 0; n < dim; ++n)
      out[n] = s.amp[n ^ p_code] * std::conj(s.amp[n]);
    return;
  }
  // general d: walk indices with explicit digits
  std::vector<int> pd(s.N);
  {
    int64_t rest = p_code;
    for (int i = s.N - 1; i >= 0; --i) {
      pd[i] = static_cast<int>(rest % d);
      rest /= d;
    }
  }
  std::vector<int> digits(s.N, 0);
  int64_t shifted = 0;
  const auto strides = [&] {
    std::vector<int64_t> v(s.N);
    for (int i = 0; i < s.N; ++i) v[i] = ipow(d, s.N - 1 - i);
    return v;
  }();
  for (int i = 0; i < s.N; ++i) shifted += ((0 - pd[i]) % d + d) % d * strides[i];
  for (int64_t n = 0;; ++n) {
    out[n] = s.amp[shifted] * std::conj(s.amp[n]);
    if (n + 1 >= dim) break;
    // increment base-d counter and maintain the shifted index
    for (int i = s.N - 1; i >= 0; --i) {
      const int old = digits[i];
      digits[i] = (old + 1) % d;
      const int olds = (old - pd[i] % d + d) % d;
      const int news = (digits[i] - pd[i] % d + d) % d;
      shifted += (news - olds) * strides[i];
      if (digits[i] != 0) break;
    }
  }
}

}  // namespace css_detail

// Fast route for A = span{1_D}: Upsilon = sum_{a,p} <Z_a X_p>^D / d^N computed
// from Fourier transforms of the generalized density-matrix diagonals.
inline double css_upsilon_pauli_spectrum(const StateVector& s) {
  const int d = s.d;
  const int D = replica_count(d);
  const int64_t dim = s.dim();
  std::vector<Complex> work(dim);
  Complex total(0, 0);
  for (int64_t p = 0; p < dim; ++p) {
    css_detail::shifted_product(s, p, work);
    css_detail::fourier_all_axes(work, d, s.N);
    if (d == 2) {
      // <P> is purely real or purely imaginary, so <P>^4 = |<P>|^4
      double acc = 0;
      for (const auto& f : work) {
        const double m2 = std::norm(f);
        acc += m2 * m2;
      }
      total += acc;
    } else {
      for (const auto& f : work) {
        Complex pw(1, 0);
        for (int j = 0; j < D; ++j) pw *= f;
        total += pw;
      }
    }
  }
  total /= static_cast<double>(dim);
  if (std::abs(total.imag()) > 1e-10)
    throw NumericalError("css_upsilon_pauli_spectrum: imaginary residue " +
                         std::to_string(total.imag()));
  return total.real();
}

// Generic route: contract k replicas of the state against r(A) per site
inline double css_upsilon_replica(const StateVector& s, const DefectSubspace& a) {
  if (a.d != s.d) throw UsageError("css_upsilon_replica: dimension mismatch");
  const int d = s.d, k = a.k, N = s.N;
  const double bits = static_cast<double>(k) * N * std::log2(double(d));
  if (bits > 22.0) throw ResourceError("css_upsilon_replica: d^(kN) exceeds 2^22");
  const int64_t q = ipow(d, k);       // per-site replica dimension
  const int64_t dim = ipow(q, N);

  // site-major product state Phi0[x_1..x_N], x_i = digits of all replicas at site i
  std::vector<Complex> phi(dim);
  std::vector<int64_t> site_stride(N), rep_index(k);
  for (int i = 0; i < N; ++i) site_stride[i] = ipow(q, N - 1 - i);
  for (int64_t code = 0; code < dim; ++code) {
    int64_t rest = code;
    std::fill(rep_index.begin(), rep_index.end(), 0);
    for (int i = 0; i < N; ++i) {
      int64_t x = rest / site_stride[i];
      rest %= site_stride[i];
      for (int j = 0; j < k; ++j) {
        const int64_t rstride = ipow(d, k - 1 - j);
        const int digit = static_cast<int>(x / rstride);
        x %= rstride;
        rep_index[j] = rep_index[j] * d + digit;
      }
    }
    Complex v(1, 0);
    for (int j = 0; j < k; ++j) v *= s.amp[rep_index[j]];
    phi[code] = v;
  }

  // apply r(A) on every site of the q-dimensional chain
  const Eigen::MatrixXd r = r_matrix(a);
  std::vector<Complex> applied = phi;
  std::vector<Complex> in(q);
  for (int site = 0; site < N; ++site) {
    const int64_t stride = site_stride[site];
    for (int64_t base = 0; base < dim; base += stride * q)
      for (int64_t rest = 0; rest < stride; ++rest) {
        const int64_t off = base + rest;
        for (int64_t x = 0; x < q; ++x) in[x] = applied[off + x * stride];
        for (int64_t x = 0; x < q; ++x) {
          Complex acc(0, 0);
          for (int64_t y = 0; y < q; ++y)
            if (r(x, y) != 0.0) acc += in[y];
          applied[off + x * stride] = acc;
        }
      }
  }

  Complex upsilon(0, 0);
  for (int64_t i = 0; i < dim; ++i) upsilon += std::conj(phi[i]) * applied[i];
  if (std::abs(upsilon.imag()) > 1e-10)
    throw NumericalError("css_upsilon_replica: imaginary residue");
  return upsilon.real();
}

// Y_A = -log Upsilon_A, dispatching to the fast route for the Y_d family
inline double css_entropy_exact(const StateVector& s, const DefectSubspace& a) {
  const double upsilon =
      is_y_family(a) ? css_upsilon_pauli_spectrum(s) : css_upsilon_replica(s, a);
  if (upsilon <= 0) {
    if (upsilon < -1e-10)
      throw NumericalError("css_entropy_exact: Upsilon = " + std::to_string(upsilon));
    throw NumericalError("css_entropy_exact: Upsilon underflowed to zero");
  }
  return -std::log(upsilon);
}

inline double css_entropy_y(const StateVector& s) {
  const double upsilon = css_upsilon_pauli_spectrum(s);
  if (upsilon <= 0) throw NumericalError("css_entropy_y: non-positive Upsilon");
  return -std::log(upsilon);
}

}  // namespace magicflow

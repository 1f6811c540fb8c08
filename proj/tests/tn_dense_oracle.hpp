#pragma once

// Brute-force contraction of the replica spin network on a dense q^N vector,
// with no matrix-product machinery. Used as the truncation-free oracle for
// the MPS contraction at small N.

#include <vector>

#include "magicflow/replica_tn.hpp"

namespace magicflow::test_oracle {

inline double dense_log_upsilon(int n, int t, int d) {
  const ReplicaTensors rt = build_replica_tensors(d);
  const int q = rt.table.order();
  int64_t dim = 1;
  for (int i = 0; i < n; ++i) dim *= q;

  // bottom boundary: product over pairs of sum_pi |pi,pi>
  std::vector<double> psi(dim, 0.0);
  std::vector<int64_t> stride(n);
  for (int i = 0; i < n; ++i) {
    stride[i] = 1;
    for (int j = i + 1; j < n; ++j) stride[i] *= q;
  }
  for (int64_t idx = 0; idx < dim; ++idx) {
    bool diag = true;
    for (int i = 0; i < n; i += 2) {
      const int a = static_cast<int>(idx / stride[i] % q);
      const int b = static_cast<int>(idx / stride[i + 1] % q);
      if (a != b) { diag = false; break; }
    }
    if (diag) psi[idx] = 1.0;
  }
  double log_acc = 0.5 * n * std::log(rt.boundary_w);

  // layers 2 .. t-1
  std::vector<double> in(q * q), out(q * q);
  for (int layer = 2; layer <= t - 1; ++layer) {
    const int start = (layer % 2 == 1) ? 0 : 1;
    for (int i = start; i + 1 < n; i += 2) {
      const int64_t shi = stride[i], slo = stride[i + 1];
      for (int64_t base = 0; base < dim; ++base) {
        if (base / slo % (q * q) != 0) continue;  // both pair digits zero
        for (int p1 = 0; p1 < q; ++p1)
          for (int p2 = 0; p2 < q; ++p2) in[p1 * q + p2] = psi[base + p1 * shi + p2 * slo];
        std::fill(out.begin(), out.end(), 0.0);
        for (int tau = 0; tau < q; ++tau) {
          double acc = 0;
          for (int p1 = 0; p1 < q; ++p1)
            for (int p2 = 0; p2 < q; ++p2) acc += rt.gate.k[tau](p1, p2) * in[p1 * q + p2];
          out[tau * q + tau] = acc;
        }
        for (int p1 = 0; p1 < q; ++p1)
          for (int p2 = 0; p2 < q; ++p2) psi[base + p1 * shi + p2 * slo] = out[p1 * q + p2];
      }
    }
    // rescale to keep doubles in range
    double mx = 0;
    for (double v : psi) mx = std::max(mx, std::abs(v));
    for (double& v : psi) v /= mx;
    log_acc += std::log(mx);
  }

  // close layer t: pair covectors on the layer's pairs, c on uncovered sites
  const int start = t == 1 ? n : ((t % 2 == 1) ? 0 : 1);
  double total = 0;
  for (int64_t idx = 0; idx < dim; ++idx) {
    if (psi[idx] == 0.0) continue;
    double f = psi[idx];
    int i = 0;
    while (i < n) {
      const int a = static_cast<int>(idx / stride[i] % q);
      if (i >= start && i + 1 < n && (i - start) % 2 == 0) {
        const int b = static_cast<int>(idx / stride[i + 1] % q);
        f *= rt.top.qmat(a, b);
        i += 2;
      } else {
        f *= rt.top.c(a);
        i += 1;
      }
    }
    total += f;
  }
  return log_acc + std::log(total);
}

}  // namespace magicflow::test_oracle

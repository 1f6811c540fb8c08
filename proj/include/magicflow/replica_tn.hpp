#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "magicflow/defect.hpp"
#include "magicflow/permutation.hpp"
#include "magicflow/spin_mps.hpp"
#include "magicflow/weingarten.hpp"

namespace magicflow {

// Two-site gate acting on the permutation spins,
//   W[(t1,t2),(p1,p2)] = delta_{t1,t2} sum_p Wg_{t1,p}(d^2) G(d)_{p,p1} G(d)_{p,p2},
// stored as one [q x q] block K_tau per output spin. Consuming indices live in
// the dual frame, so wiring between layers is a plain index contraction.
struct GateTensor {
  int d = 2;
  int D = 4;
  int q = 24;
  std::vector<MatrixXd> k;  // k[tau](p1, p2)
};

// Closure row of the network: pair covector q[(p1,p2)] plus the single-site
// covector c_tau for edge sites the top layer leaves uncovered.
struct TopTensor {
  MatrixXd qmat;
  VectorXd c;
};

struct ReplicaTensors {
  int d = 2;
  int D = 4;
  SymmetricGroupTable table;
  Eigen::MatrixXd gram_d;    // G(d)
  Eigen::MatrixXd wg;        // Wg(d^2)
  GateTensor gate;
  TopTensor top;
  double boundary_w = 0;     // weight of sum_pi |pi,pi> per bottom pair
};

inline VectorXd overlap_vector(int d, const SymmetricGroupTable& table) {
  const DefectSubspace a = DefectSubspace::y_family(d);
  const OverlapTable ot = css_overlap_table(a);
  if (static_cast<int>(ot.values.size()) != table.order())
    throw NumericalError("overlap_vector: table size mismatch");
  VectorXd c(table.order());
  // both enumerations are lexicographic
  for (int i = 0; i < table.order(); ++i) c(i) = static_cast<double>(ot.values[i]);
  return c;
}

inline GateTensor build_gate_tensor(int d, const SymmetricGroupTable& table,
                                    const Eigen::MatrixXd& gram_d, const Eigen::MatrixXd& wg) {
  const int q = table.order();
  GateTensor g;
  g.d = d;
  g.D = table.D;
  g.q = q;
  g.k.assign(q, MatrixXd::Zero(q, q));
  for (int tau = 0; tau < q; ++tau)
    for (int p1 = 0; p1 < q; ++p1)
      for (int p2 = 0; p2 < q; ++p2) {
        double acc = 0;
        for (int p = 0; p < q; ++p) acc += wg(tau, p) * gram_d(p, p1) * gram_d(p, p2);
        g.k[tau](p1, p2) = acc;
      }
  return g;
}

inline TopTensor build_top_tensor(int d, const SymmetricGroupTable& table,
                                  const GateTensor& gate) {
  const int q = table.order();
  TopTensor t;
  t.c = overlap_vector(d, table);
  t.qmat = MatrixXd::Zero(q, q);
  for (int tau = 0; tau < q; ++tau) t.qmat += t.c(tau) * t.c(tau) * gate.k[tau];
  return t;
}

inline ReplicaTensors build_replica_tensors(int d) {
  require_prime(d);
  const int D = replica_count(d);
  ReplicaTensors r;
  r.d = d;
  r.D = D;
  r.table = SymmetricGroupTable::build(D);
  r.gram_d = gram_matrix(d, r.table);
  r.wg = weingarten_matrix(d, r.table);
  r.gate = build_gate_tensor(d, r.table, r.gram_d, r.wg);
  r.top = build_top_tensor(d, r.table, r.gate);
  r.boundary_w = boundary_weight(d, D);
  return r;
}

struct TnResult {
  double log_upsilon = 0;
  TnDiagnostics diag;
};

// Evolve the bottom boundary through layers 2..t-1 and close layer t; layer 1
// is the boundary itself and t = 1 closes it directly with the c covector.
class ReplicaContraction {
 public:
  ReplicaContraction(int N, int d, int chi, double cutoff)
      : tensors_(build_replica_tensors(d)),
        mps_(N, tensors_.table.order(), 0.5 * N * std::log(tensors_.boundary_w)),
        chi_(chi),
        cutoff_(cutoff),
        applied_layers_(1) {
    if (chi < 1) throw UsageError("ReplicaContraction: chi must be >= 1");
  }

  // advance the evolved state so that `layers` layers (including the bottom
  // boundary) have been absorbed
  void evolve_to(int layers) {
    while (applied_layers_ < layers) {
      ++applied_layers_;
      mps_.apply_layer(applied_layers_, tensors_.gate.k, chi_, cutoff_, diag_);
      if (!std::isfinite(mps_.log_scale()))
        throw NumericalError("ReplicaContraction: non-finite scale at layer " +
                             std::to_string(applied_layers_));
    }
  }

  // log E[Upsilon_d] at depth t; requires t-1 layers evolved
  TnResult close_at_depth(int t) {
    if (t < 1) throw UsageError("ReplicaContraction: t must be >= 1");
    evolve_to(t - 1 < 1 ? 1 : t - 1);
    TnResult out;
    out.diag = diag_;
    out.diag.max_bond = std::max(out.diag.max_bond, mps_.max_bond_dim());
    if (t == 1) {
      out.log_upsilon = mps_.log_close_single(tensors_.top.c);
    } else {
      const int start = (t % 2 == 1) ? 0 : 1;
      out.log_upsilon = mps_.log_close_top(tensors_.top.qmat, tensors_.top.c, start);
    }
    return out;
  }

  const ReplicaTensors& tensors() const { return tensors_; }

 private:
  ReplicaTensors tensors_;
  SpinMps mps_;
  int chi_;
  double cutoff_;
  int applied_layers_;
  TnDiagnostics diag_;
};

inline TnResult contract_annealed_upsilon(int N, int t, int d, int chi,
                                          double cutoff = 1e-14) {
  if (N < 2 || N % 2 != 0) throw UsageError("contract_annealed_upsilon: N must be even");
  if (t < 1) throw UsageError("contract_annealed_upsilon: t must be >= 1");
  ReplicaContraction ctx(N, d, chi, cutoff);
  return ctx.close_at_depth(t);
}

// annealed CSS entropy Y~_d = -log E[Upsilon_d]
inline double annealed_css_entropy(int N, int t, int d, int chi, double cutoff = 1e-14) {
  return -contract_annealed_upsilon(N, t, d, chi, cutoff).log_upsilon;
}

// full depth scan sharing one evolution pass; returns log E[Upsilon] per t
inline std::vector<TnResult> contract_depth_scan(int N, const std::vector<int>& ts, int d,
                                                 int chi, double cutoff = 1e-14) {
  if (N < 2 || N % 2 != 0) throw UsageError("contract_depth_scan: N must be even");
  std::vector<int> sorted = ts;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() < 1)
    throw UsageError("contract_depth_scan: t must be >= 1");
  ReplicaContraction ctx(N, d, chi, cutoff);
  std::vector<TnResult> out;
  out.reserve(ts.size());
  for (int t : sorted) out.push_back(ctx.close_at_depth(t));
  // restore caller order
  std::vector<TnResult> ordered(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), ts[i]);
    ordered[i] = out[static_cast<size_t>(it - sorted.begin())];
  }
  return ordered;
}

}  // namespace magicflow

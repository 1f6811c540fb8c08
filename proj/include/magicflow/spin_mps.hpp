#pragma once

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "magicflow/errors.hpp"

namespace magicflow {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct TnDiagnostics {
  int max_bond = 1;
  double discarded_weight = 0.0;
};

namespace mps_detail {

struct SvdResult {
  MatrixXd u;
  VectorXd s;
  MatrixXd vt;
};

inline SvdResult svd_econ(MatrixXd a) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const int k = std::min(m, n);
  SvdResult r;
  r.u.resize(m, k);
  r.s.resize(k);
  r.vt.resize(k, n);
  const int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, a.data(), m,
                                  r.s.data(), r.u.data(), m, r.vt.data(), k);
  if (info != 0) {
    Eigen::BDCSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    r.u = svd.matrixU();
    r.s = svd.singularValues();
    r.vt = svd.matrixV().transpose();
  }
  return r;
}

struct QrResult {
  MatrixXd q;
  MatrixXd r;
};

inline QrResult qr_thin(const MatrixXd& a) {
  const int k = static_cast<int>(std::min(a.rows(), a.cols()));
  Eigen::HouseholderQR<MatrixXd> qr(a);
  QrResult out;
  out.q = qr.householderQ() * MatrixXd::Identity(a.rows(), k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

// a = l * qt with qt having orthonormal rows
inline QrResult lq_thin(const MatrixXd& a) {
  QrResult t = qr_thin(a.transpose());
  QrResult out;
  out.q = t.q.transpose();      // rows orthonormal
  out.r = t.r.transpose();      // lower-triangular left factor
  return out;
}

inline std::vector<std::vector<int>> group_indices(const std::vector<int>& labels, int q) {
  std::vector<std::vector<int>> groups(q);
  for (size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(static_cast<int>(i));
  return groups;
}

}  // namespace mps_detail

// Matrix product state over N spin sites of local dimension q = D!.
//
// Every tensor written by a gate or the boundary has its physical index equal
// to the spin label carried by one of its bonds, so tied tensors are stored as
// plain chiL x chiR matrices. Canonical-center moves can break a neighbor's
// tie; such sites fall back to dense storage (one slice per spin value) until
// the next gate rewrites them.
class SpinMps {
 public:
  enum class Kind { TiedLeft, TiedRight, Dense };

  struct Site {
    Kind kind = Kind::TiedLeft;
    MatrixXd mat;
    std::vector<MatrixXd> slices;
  };

  // bottom boundary: pairs (0,1),(2,3),... each holding sum_pi |pi,pi>, with
  // the per-pair weight carried in log_scale
  SpinMps(int n, int q, double log_scale)
      : n_(n), q_(q), log_scale_(log_scale) {
    if (n < 2 || n % 2 != 0) throw UsageError("SpinMps: N must be even and >= 2");
    sites_.resize(n);
    dims_.assign(n + 1, 1);
    labels_.assign(n + 1, {});
    std::vector<int> ident(q);
    for (int s = 0; s < q; ++s) ident[s] = s;
    for (int i = 0; i < n; i += 2) {
      dims_[i + 1] = q;
      labels_[i + 1] = ident;
      sites_[i].kind = Kind::TiedRight;
      sites_[i].mat = MatrixXd::Ones(1, q);
      sites_[i + 1].kind = Kind::TiedLeft;
      sites_[i + 1].mat = MatrixXd::Ones(q, 1);
    }
  }

  int sites() const { return n_; }
  int local_dim() const { return q_; }
  double log_scale() const { return log_scale_; }
  int bond_dim(int b) const { return dims_[b]; }
  int max_bond_dim() const { return *std::max_element(dims_.begin(), dims_.end()); }

  // apply one brick-wall layer of the gate K (q matrices K_tau[pi1, pi2]);
  // layer is 1-based so odd layers start at site 0
  void apply_layer(int layer, const std::vector<MatrixXd>& gate, int chi, double cutoff,
                   TnDiagnostics& diag) {
    const int start = (layer % 2 == 1) ? 0 : 1;
    std::vector<int> lefts;
    for (int i = start; i + 1 < n_; i += 2) lefts.push_back(i);
    if (lefts.empty()) return;
    const bool l2r = next_l2r_;
    next_l2r_ = !next_l2r_;
    if (l2r)
      for (int i : lefts) apply_gate(i, gate, chi, cutoff, true, diag);
    else
      for (auto it = lefts.rbegin(); it != lefts.rend(); ++it)
        apply_gate(*it, gate, chi, cutoff, false, diag);
  }

  // log of the full contraction against single-site covectors c at every site
  double log_close_single(const VectorXd& c) const {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    double acc = 0;
    for (int i = 0; i < n_; ++i) {
      v = close_site(v, i, c);
      acc += rescale(v);
    }
    return finish(v, acc);
  }

  // log of the contraction closed by the two-site covector qmat on pairs
  // starting at `start`, and by c on uncovered edge sites
  double log_close_top(const MatrixXd& qmat, const VectorXd& c, int start) const {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    double acc = 0;
    int i = 0;
    while (i < start) {
      v = close_site(v, i, c);
      acc += rescale(v);
      ++i;
    }
    while (i + 1 < n_) {
      v = close_pair(v, i, qmat);
      acc += rescale(v);
      i += 2;
    }
    while (i < n_) {
      v = close_site(v, i, c);
      acc += rescale(v);
      ++i;
    }
    return finish(v, acc);
  }

 private:
  int n_;
  int q_;
  double log_scale_;
  std::vector<Site> sites_;
  std::vector<int> dims_;
  std::vector<std::vector<int>> labels_;
  int center_ = 0;
  bool next_l2r_ = true;

  const std::vector<int>& tied_labels(int site) const {
    const int bond = sites_[site].kind == Kind::TiedLeft ? site : site + 1;
    if (labels_[bond].empty())
      throw NumericalError("SpinMps: tied site references an unlabeled bond");
    return labels_[bond];
  }

  // dense slices of a site tensor (one chiL x chiR matrix per spin value)
  std::vector<MatrixXd> densify(int site) const {
    const Site& s = sites_[site];
    if (s.kind == Kind::Dense) return s.slices;
    const int chiL = dims_[site], chiR = dims_[site + 1];
    std::vector<MatrixXd> out(q_, MatrixXd::Zero(chiL, chiR));
    const auto& lab = tied_labels(site);
    if (s.kind == Kind::TiedLeft) {
      for (int a = 0; a < chiL; ++a) out[lab[a]].row(a) = s.mat.row(a);
    } else {
      for (int b = 0; b < chiR; ++b) out[lab[b]].col(b) = s.mat.col(b);
    }
    return out;
  }

  static double rescale(Eigen::RowVectorXd& v) {
    const double m = v.cwiseAbs().maxCoeff();
    if (m <= 0 || !std::isfinite(m))
      throw NumericalError("SpinMps: contraction vanished or diverged");
    v /= m;
    return std::log(m);
  }

  double finish(const Eigen::RowVectorXd& v, double acc) const {
    if (v.size() != 1) throw NumericalError("SpinMps: closure did not reach a scalar");
    if (v(0) <= 0)
      throw NumericalError("SpinMps: non-positive contraction value");
    return log_scale_ + acc + std::log(v(0));
  }

  Eigen::RowVectorXd close_site(const Eigen::RowVectorXd& v, int i, const VectorXd& c) const {
    const Site& s = sites_[i];
    if (s.kind == Kind::TiedLeft) {
      const auto& lab = tied_labels(i);
      Eigen::RowVectorXd scaled = v;
      for (int a = 0; a < v.size(); ++a) scaled(a) *= c(lab[a]);
      return scaled * s.mat;
    }
    if (s.kind == Kind::TiedRight) {
      const auto& lab = tied_labels(i);
      Eigen::RowVectorXd out = v * s.mat;
      for (int b = 0; b < out.size(); ++b) out(b) *= c(lab[b]);
      return out;
    }
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(dims_[i + 1]);
    for (int sv = 0; sv < q_; ++sv) out += c(sv) * (v * s.slices[sv]);
    return out;
  }

  Eigen::RowVectorXd close_pair(const Eigen::RowVectorXd& v, int i, const MatrixXd& qmat) const {
    const Site& a = sites_[i];
    const int mid = dims_[i + 1];
    // w[s, m] = sum_a v[a] A[a, s, m]
    MatrixXd w = MatrixXd::Zero(q_, mid);
    if (a.kind == Kind::TiedLeft) {
      const auto& lab = tied_labels(i);
      for (int r = 0; r < v.size(); ++r) w.row(lab[r]) += v(r) * a.mat.row(r);
    } else if (a.kind == Kind::TiedRight) {
      const auto& lab = tied_labels(i);
      Eigen::RowVectorXd u = v * a.mat;
      for (int m = 0; m < mid; ++m) w(lab[m], m) = u(m);
    } else {
      for (int sv = 0; sv < q_; ++sv) w.row(sv) = v * a.slices[sv];
    }
    const MatrixXd x = qmat.transpose() * w;  // x[s2, m]
    const Site& b = sites_[i + 1];
    const int chiR = dims_[i + 2];
    if (b.kind == Kind::TiedLeft) {
      const auto& lab = tied_labels(i + 1);
      Eigen::RowVectorXd y(mid);
      for (int m = 0; m < mid; ++m) y(m) = x(lab[m], m);
      return y * b.mat;
    }
    if (b.kind == Kind::TiedRight) {
      const auto& lab = tied_labels(i + 1);
      const MatrixXd y = x * b.mat;  // [q, chiR]
      Eigen::RowVectorXd out(chiR);
      for (int c2 = 0; c2 < chiR; ++c2) out(c2) = y(lab[c2], c2);
      return out;
    }
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(chiR);
    for (int sv = 0; sv < q_; ++sv) out += x.row(sv) * b.slices[sv];
    return out;
  }

  // ---- canonical center moves ----

  void move_right(int c) {
    Site& s = sites_[c];
    MatrixXd r_full;
    std::vector<int> new_labels;  // empty = unlabeled bond
    bool group_preserving = false;
    if (s.kind == Kind::TiedLeft) {
      auto qr = mps_detail::qr_thin(s.mat);
      s.mat = std::move(qr.q);
      r_full = std::move(qr.r);
    } else if (s.kind == Kind::TiedRight) {
      const auto groups = mps_detail::group_indices(labels_[c + 1], q_);
      const int chiL = dims_[c];
      std::vector<MatrixXd> qs(q_);
      std::vector<MatrixXd> rs(q_);
      int total = 0;
      for (int sv = 0; sv < q_; ++sv) {
        if (groups[sv].empty()) continue;
        MatrixXd sub(chiL, groups[sv].size());
        for (size_t j = 0; j < groups[sv].size(); ++j) sub.col(j) = s.mat.col(groups[sv][j]);
        auto qr = mps_detail::qr_thin(sub);
        total += static_cast<int>(qr.q.cols());
        qs[sv] = std::move(qr.q);
        rs[sv] = std::move(qr.r);
      }
      MatrixXd qnew(chiL, total);
      r_full = MatrixXd::Zero(total, dims_[c + 1]);
      new_labels.reserve(total);
      int off = 0;
      for (int sv = 0; sv < q_; ++sv) {
        if (groups[sv].empty()) continue;
        const int r = static_cast<int>(qs[sv].cols());
        qnew.middleCols(off, r) = qs[sv];
        for (size_t j = 0; j < groups[sv].size(); ++j)
          r_full.col(groups[sv][j]).segment(off, r) = rs[sv].col(j);
        for (int j = 0; j < r; ++j) new_labels.push_back(sv);
        off += r;
      }
      s.mat = std::move(qnew);
      group_preserving = true;
    } else {
      const int chiL = dims_[c];
      MatrixXd big(static_cast<Eigen::Index>(chiL) * q_, dims_[c + 1]);
      for (int sv = 0; sv < q_; ++sv) big.middleRows(static_cast<Eigen::Index>(sv) * chiL, chiL) = s.slices[sv];
      auto qr = mps_detail::qr_thin(big);
      const int r = static_cast<int>(qr.q.cols());
      s.slices.assign(q_, MatrixXd());
      for (int sv = 0; sv < q_; ++sv)
        s.slices[sv] = qr.q.middleRows(static_cast<Eigen::Index>(sv) * chiL, chiL);
      r_full = std::move(qr.r);
    }
    fold_from_left(c + 1, r_full, new_labels, group_preserving);
    center_ = c + 1;
  }

  void move_left(int c) {
    Site& s = sites_[c];
    MatrixXd l_full;
    std::vector<int> new_labels;
    bool group_preserving = false;
    if (s.kind == Kind::TiedRight) {
      auto lq = mps_detail::lq_thin(s.mat);
      s.mat = std::move(lq.q);
      l_full = std::move(lq.r);
    } else if (s.kind == Kind::TiedLeft) {
      const auto groups = mps_detail::group_indices(labels_[c], q_);
      const int chiR = dims_[c + 1];
      std::vector<MatrixXd> qs(q_), ls(q_);
      int total = 0;
      for (int sv = 0; sv < q_; ++sv) {
        if (groups[sv].empty()) continue;
        MatrixXd sub(groups[sv].size(), chiR);
        for (size_t j = 0; j < groups[sv].size(); ++j) sub.row(j) = s.mat.row(groups[sv][j]);
        auto lq = mps_detail::lq_thin(sub);
        total += static_cast<int>(lq.q.rows());
        qs[sv] = std::move(lq.q);
        ls[sv] = std::move(lq.r);
      }
      MatrixXd qnew(total, chiR);
      l_full = MatrixXd::Zero(dims_[c], total);
      new_labels.reserve(total);
      int off = 0;
      for (int sv = 0; sv < q_; ++sv) {
        if (groups[sv].empty()) continue;
        const int r = static_cast<int>(qs[sv].rows());
        qnew.middleRows(off, r) = qs[sv];
        for (size_t j = 0; j < groups[sv].size(); ++j)
          l_full.row(groups[sv][j]).segment(off, r) = ls[sv].row(j);
        for (int j = 0; j < r; ++j) new_labels.push_back(sv);
        off += r;
      }
      s.mat = std::move(qnew);
      group_preserving = true;
    } else {
      const int chiR = dims_[c + 1];
      MatrixXd big(dims_[c], static_cast<Eigen::Index>(chiR) * q_);
      for (int sv = 0; sv < q_; ++sv) big.middleCols(static_cast<Eigen::Index>(sv) * chiR, chiR) = s.slices[sv];
      auto lq = mps_detail::lq_thin(big);
      const int r = static_cast<int>(lq.q.rows());
      s.slices.assign(q_, MatrixXd());
      for (int sv = 0; sv < q_; ++sv)
        s.slices[sv] = lq.q.middleCols(static_cast<Eigen::Index>(sv) * chiR, chiR);
      l_full = std::move(lq.r);
    }
    fold_from_right(c - 1, l_full, new_labels, group_preserving);
    center_ = c - 1;
  }

  void fold_from_left(int site, const MatrixXd& r, const std::vector<int>& new_labels,
                      bool group_preserving) {
    Site& s = sites_[site];
    const std::vector<int> old_labels = labels_[site];
    labels_[site] = new_labels;
    dims_[site] = static_cast<int>(r.rows());
    if (s.kind == Kind::TiedRight) {
      s.mat = r * s.mat;
      return;
    }
    if (s.kind == Kind::TiedLeft) {
      if (group_preserving) {
        s.mat = r * s.mat;
        return;
      }
      // tie to the rewritten bond is lost; fall back to dense slices
      const auto groups = mps_detail::group_indices(old_labels, q_);
      std::vector<MatrixXd> slices(q_, MatrixXd::Zero(r.rows(), s.mat.cols()));
      for (int sv = 0; sv < q_; ++sv)
        for (int m : groups[sv]) slices[sv] += r.col(m) * s.mat.row(m);
      s.kind = Kind::Dense;
      s.slices = std::move(slices);
      s.mat.resize(0, 0);
      return;
    }
    for (auto& slice : s.slices) slice = r * slice;
  }

  void fold_from_right(int site, const MatrixXd& l, const std::vector<int>& new_labels,
                       bool group_preserving) {
    Site& s = sites_[site];
    const std::vector<int> old_labels = labels_[site + 1];
    labels_[site + 1] = new_labels;
    dims_[site + 1] = static_cast<int>(l.cols());
    if (s.kind == Kind::TiedLeft) {
      s.mat = s.mat * l;
      return;
    }
    if (s.kind == Kind::TiedRight) {
      if (group_preserving) {
        s.mat = s.mat * l;
        return;
      }
      const auto groups = mps_detail::group_indices(old_labels, q_);
      std::vector<MatrixXd> slices(q_, MatrixXd::Zero(s.mat.rows(), l.cols()));
      for (int sv = 0; sv < q_; ++sv)
        for (int m : groups[sv]) slices[sv] += s.mat.col(m) * l.row(m);
      s.kind = Kind::Dense;
      s.slices = std::move(slices);
      s.mat.resize(0, 0);
      return;
    }
    for (auto& slice : s.slices) slice = slice * l;
  }

  // ---- gate application ----

  void apply_gate(int i, const std::vector<MatrixXd>& gate, int chi, double cutoff,
                  bool l2r, TnDiagnostics& diag) {
    while (center_ < i) move_right(center_);
    while (center_ > i + 1) move_left(center_);

    std::vector<MatrixXd> c = build_gate_blocks(i, gate);
    split_pair(i, c, chi, cutoff, l2r, diag);
  }

  // C_tau[a, b] = sum_{p1 p2 m} K_tau[p1, p2] A[a, p1, m] B[m, p2, b]
  std::vector<MatrixXd> build_gate_blocks(int i, const std::vector<MatrixXd>& gate) const {
    const Site& a = sites_[i];
    const Site& b = sites_[i + 1];
    const int chiL = dims_[i], mid = dims_[i + 1], chiR = dims_[i + 2];
    std::vector<MatrixXd> c(q_, MatrixXd::Zero(chiL, chiR));

    const bool a_outer = a.kind == Kind::TiedLeft;   // p1 fixed by the outer-left bond
    const bool a_mid = a.kind == Kind::TiedRight;    // p1 fixed by the middle bond
    const bool b_mid = b.kind == Kind::TiedLeft;     // p2 fixed by the middle bond
    const bool b_outer = b.kind == Kind::TiedRight;  // p2 fixed by the outer-right bond

    // gate values pre-indexed by the bond labels of the tied sides
    auto rows_by_label = [&](const std::vector<int>& la) {
      std::vector<MatrixXd> f(q_, MatrixXd(chiL, q_));
      for (int tau = 0; tau < q_; ++tau)
        for (int s2 = 0; s2 < q_; ++s2)
          for (int row = 0; row < chiL; ++row) f[tau](row, s2) = gate[tau](la[row], s2);
      return f;
    };
    auto cols_by_label = [&](const std::vector<int>& rb) {
      std::vector<MatrixXd> f(q_, MatrixXd(q_, chiR));
      for (int tau = 0; tau < q_; ++tau)
        for (int col = 0; col < chiR; ++col)
          for (int s1 = 0; s1 < q_; ++s1) f[tau](s1, col) = gate[tau](s1, rb[col]);
      return f;
    };

    if (a_outer && b_outer) {
      const auto frow = rows_by_label(tied_labels(i));
      const auto& rb = tied_labels(i + 1);
      const MatrixXd m = a.mat * b.mat;
      for (int tau = 0; tau < q_; ++tau)
        for (int col = 0; col < chiR; ++col)
          c[tau].col(col) = frow[tau].col(rb[col]).cwiseProduct(m.col(col));
      return c;
    }
    if ((a_outer && b_mid) || (a_mid && b_outer) || (a_mid && b_mid)) {
      const auto groups = mps_detail::group_indices(labels_[i + 1], q_);
      std::vector<MatrixXd> frow, fcol;
      if (a_outer) frow = rows_by_label(tied_labels(i));
      if (b_outer) fcol = cols_by_label(tied_labels(i + 1));
      for (int sv = 0; sv < q_; ++sv) {
        if (groups[sv].empty()) continue;
        MatrixXd asub(chiL, groups[sv].size());
        MatrixXd bsub(groups[sv].size(), chiR);
        for (size_t j = 0; j < groups[sv].size(); ++j) {
          asub.col(j) = a.mat.col(groups[sv][j]);
          bsub.row(j) = b.mat.row(groups[sv][j]);
        }
        const MatrixXd p = asub * bsub;
        if (a_outer && b_mid) {
          for (int tau = 0; tau < q_; ++tau)
            c[tau].noalias() += frow[tau].col(sv).asDiagonal() * p;
        } else if (a_mid && b_outer) {
          for (int tau = 0; tau < q_; ++tau)
            c[tau].noalias() += p * fcol[tau].row(sv).transpose().asDiagonal();
        } else {
          for (int tau = 0; tau < q_; ++tau) c[tau] += gate[tau](sv, sv) * p;
        }
      }
      return c;
    }
    if (a.kind == Kind::Dense && b_outer) {
      const auto fcol = cols_by_label(tied_labels(i + 1));
      for (int p1 = 0; p1 < q_; ++p1) {
        const MatrixXd t = a.slices[p1] * b.mat;
        for (int tau = 0; tau < q_; ++tau)
          c[tau].noalias() += t * fcol[tau].row(p1).transpose().asDiagonal();
      }
      return c;
    }
    if (a_outer && b.kind == Kind::Dense) {
      const auto frow = rows_by_label(tied_labels(i));
      for (int p2 = 0; p2 < q_; ++p2) {
        const MatrixXd t = a.mat * b.slices[p2];
        for (int tau = 0; tau < q_; ++tau)
          c[tau].noalias() += frow[tau].col(p2).asDiagonal() * t;
      }
      return c;
    }
    // generic fallback
    const auto sa = densify(i);
    const auto sb = densify(i + 1);
    for (int p1 = 0; p1 < q_; ++p1)
      for (int p2 = 0; p2 < q_; ++p2) {
        const MatrixXd t = sa[p1] * sb[p2];
        for (int tau = 0; tau < q_; ++tau) {
          const double w = gate[tau](p1, p2);
          if (w != 0.0) c[tau] += w * t;
        }
      }
    return c;
  }

  void split_pair(int i, const std::vector<MatrixXd>& c, int chi, double cutoff, bool l2r,
                  TnDiagnostics& diag) {
    const int chiL = dims_[i], chiR = dims_[i + 2];
    std::vector<mps_detail::SvdResult> svds(q_);
    struct Candidate {
      double sigma;
      int tau;
      int idx;
    };
    std::vector<Candidate> cand;
    for (int tau = 0; tau < q_; ++tau) {
      if (c[tau].cwiseAbs().maxCoeff() == 0.0) continue;
      svds[tau] = mps_detail::svd_econ(c[tau]);
      for (int j = 0; j < svds[tau].s.size(); ++j)
        if (svds[tau].s(j) > 0) cand.push_back({svds[tau].s(j), tau, j});
    }
    if (cand.empty()) throw NumericalError("SpinMps: gate produced a zero block");
    std::sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
      if (x.sigma != y.sigma) return x.sigma > y.sigma;
      if (x.tau != y.tau) return x.tau < y.tau;
      return x.idx < y.idx;
    });
    double total = 0;
    for (const auto& cd : cand) total += cd.sigma * cd.sigma;
    size_t keep = std::min<size_t>(cand.size(), static_cast<size_t>(std::max(chi, 1)));
    double dropped = 0;
    for (size_t j = keep; j < cand.size(); ++j) dropped += cand[j].sigma * cand[j].sigma;
    while (keep > 1) {
      const double w = cand[keep - 1].sigma * cand[keep - 1].sigma;
      if (dropped + w > cutoff * total) break;
      dropped += w;
      --keep;
    }
    diag.discarded_weight += dropped / total;

    const int k = static_cast<int>(keep);
    double norm2 = 0;
    for (int j = 0; j < k; ++j) norm2 += cand[j].sigma * cand[j].sigma;
    const double scale = std::sqrt(norm2);

    MatrixXd left(chiL, k), right(k, chiR);
    std::vector<int> new_labels(k);
    for (int j = 0; j < k; ++j) {
      const auto& cd = cand[j];
      new_labels[j] = cd.tau;
      const double sigma = cd.sigma / scale;
      if (l2r) {
        left.col(j) = svds[cd.tau].u.col(cd.idx);
        right.row(j) = sigma * svds[cd.tau].vt.row(cd.idx);
      } else {
        left.col(j) = sigma * svds[cd.tau].u.col(cd.idx);
        right.row(j) = svds[cd.tau].vt.row(cd.idx);
      }
    }
    sites_[i].kind = Kind::TiedRight;
    sites_[i].mat = std::move(left);
    sites_[i].slices.clear();
    sites_[i + 1].kind = Kind::TiedLeft;
    sites_[i + 1].mat = std::move(right);
    sites_[i + 1].slices.clear();
    dims_[i + 1] = k;
    labels_[i + 1] = std::move(new_labels);
    log_scale_ += std::log(scale);
    diag.max_bond = std::max(diag.max_bond, k);
    center_ = l2r ? i + 1 : i;
  }
};

}  // namespace magicflow

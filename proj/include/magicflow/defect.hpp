#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "magicflow/pauli.hpp"
#include "magicflow/zfield.hpp"

namespace magicflow {

using Vec = std::vector<int>;  // vector over Z_d^k

namespace defect_detail {

inline int dot_mod(const Vec& a, const Vec& b, int m) {
  long long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += static_cast<long long>(a[i]) * b[i];
  return static_cast<int>(s % m);
}

inline bool satisfies_conditions(const Vec& v, int d, int D) {
  long long selfdot = 0, sum = 0;
  for (int x : v) {
    selfdot += static_cast<long long>(x) * x;
    sum += x;
  }
  return selfdot % D == 0 && sum % d == 0;
}

inline int64_t encode(const Vec& v, int d) {
  int64_t code = 0;
  for (auto it = v.rbegin(); it != v.rend(); ++it) code = code * d + *it;
  return code;
}

inline Vec decode(int64_t code, int d, int k) {
  Vec v(k);
  for (int i = 0; i < k; ++i) {
    v[i] = static_cast<int>(code % d);
    code /= d;
  }
  return v;
}

// full span of the generators, sorted by encoded value
inline std::vector<Vec> span_elements(const std::vector<Vec>& gens, int d, int k) {
  std::set<int64_t> codes = {0};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int64_t> snapshot(codes.begin(), codes.end());
    for (int64_t c : snapshot) {
      Vec base = decode(c, d, k);
      for (const Vec& g : gens) {
        Vec e = base;
        for (int i = 0; i < k; ++i) e[i] = (e[i] + g[i]) % d;
        if (codes.insert(encode(e, d)).second) grew = true;
      }
    }
  }
  std::vector<Vec> out;
  out.reserve(codes.size());
  for (int64_t c : codes) out.push_back(decode(c, d, k));
  return out;
}

inline int rank_mod_d(std::vector<Vec> rows, int d) {
  const int k = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  int r = 0;
  for (int col = 0; col < k && r < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col] % d != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    const int inv = mod_inverse(rows[r][col], d);
    for (int j = 0; j < k; ++j) rows[r][j] = rows[r][j] * inv % d;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || rows[i][col] % d == 0) continue;
      const int f = rows[i][col];
      for (int j = 0; j < k; ++j) rows[i][j] = ((rows[i][j] - f * rows[r][j]) % d + d) % d;
    }
    ++r;
  }
  return r;
}

}  // namespace defect_detail

// A subspace A of Z_d^k whose elements x all satisfy x.x = 0 (mod D) and
// x.1_k = 0 (mod d); seeds a CSS stabilizer code on the k replicas.
struct DefectSubspace {
  int d = 2;
  int k = 4;
  std::vector<Vec> generators;
  int r_A = 0;
  std::vector<Vec> elements;  // the d^r_A span vectors, canonically sorted

  static DefectSubspace from_generators(int d, int k, std::vector<Vec> gens) {
    require_prime(d);
    DefectSubspace a;
    a.d = d;
    a.k = k;
    for (auto& g : gens) {
      if (static_cast<int>(g.size()) != k) throw UsageError("defect generator length != k");
      for (auto& x : g) x = ((x % d) + d) % d;
    }
    a.generators = std::move(gens);
    a.elements = defect_detail::span_elements(a.generators, d, k);
    a.r_A = defect_detail::rank_mod_d(a.generators, d);
    return a;
  }

  // A = span{1_D} with k = D replicas, the Y_d family
  static DefectSubspace y_family(int d) {
    const int D = replica_count(d);
    return from_generators(d, D, {Vec(D, 1)});
  }

  int64_t size() const { return static_cast<int64_t>(elements.size()); }
};

inline bool validate_defect_subspace(const DefectSubspace& a) {
  const int D = replica_count(a.d);
  if (a.r_A <= 0 || a.r_A >= a.k) return false;
  if (a.size() != ipow(a.d, a.r_A)) return false;
  for (const auto& x : a.elements)
    if (!defect_detail::satisfies_conditions(x, a.d, D)) return false;
  return true;
}

// Enumerate every defect subspace of Z_d^k: scan all vectors for the defect
// conditions, keep one representative per line, then depth-first search over
// mutually compatible generator sets with span dedup.
inline std::vector<DefectSubspace> find_defect_subspaces(int d, int k) {
  require_prime(d);
  if (k < 1 || k > 6) throw UsageError("find_defect_subspaces: k must be in [1, 6]");
  if (std::pow(double(d), k) > 1e8)
    throw ResourceError("find_defect_subspaces: d^k exceeds the enumeration guard");
  const int D = replica_count(d);
  const int64_t total = ipow(d, k);

  std::vector<Vec> candidates;
  std::set<int64_t> line_seen;
  for (int64_t n = 1; n < total; ++n) {
    Vec v = defect_detail::decode(n, d, k);
    if (!defect_detail::satisfies_conditions(v, d, D)) continue;
    if (line_seen.count(n)) continue;
    for (int c = 1; c < d; ++c) {
      Vec m(k);
      for (int i = 0; i < k; ++i) m[i] = v[i] * c % d;
      line_seen.insert(defect_detail::encode(m, d));
    }
    candidates.push_back(std::move(v));
  }

  std::set<std::vector<int64_t>> seen_spans;
  std::vector<DefectSubspace> out;

  auto span_valid = [&](const std::vector<Vec>& elems) {
    for (const auto& x : elems)
      if (!defect_detail::satisfies_conditions(x, d, D)) return false;
    return true;
  };

  auto emit = [&](const std::vector<Vec>& gens) {
    auto elems = defect_detail::span_elements(gens, d, k);
    if (!span_valid(elems)) return false;
    std::vector<int64_t> key;
    key.reserve(elems.size());
    for (const auto& e : elems) key.push_back(defect_detail::encode(e, d));
    if (!seen_spans.insert(key).second) return true;  // already known, still compatible
    DefectSubspace a = DefectSubspace::from_generators(d, k, gens);
    if (a.r_A < k) out.push_back(std::move(a));
    return true;
  };

  std::vector<Vec> stack;
  auto dfs = [&](auto&& self, size_t start) -> void {
    for (size_t i = start; i < candidates.size(); ++i) {
      const Vec& v = candidates[i];
      bool compatible = true;
      for (const Vec& g : stack)
        if (defect_detail::dot_mod(g, v, d) != 0) { compatible = false; break; }
      if (!compatible) continue;
      stack.push_back(v);
      if (defect_detail::rank_mod_d(stack, d) == static_cast<int>(stack.size()) && emit(stack))
        self(self, i + 1);
      stack.pop_back();
    }
  };
  dfs(dfs, 0);

  std::sort(out.begin(), out.end(), [&](const DefectSubspace& a, const DefectSubspace& b) {
    if (a.r_A != b.r_A) return a.r_A < b.r_A;
    std::vector<int64_t> ka, kb;
    for (const auto& e : a.elements) ka.push_back(defect_detail::encode(e, a.d));
    for (const auto& e : b.elements) kb.push_back(defect_detail::encode(e, b.d));
    return ka < kb;
  });
  return out;
}

// CSS projector Q_A = (1/|A|^2) sum_{q,p in A} Z_q X_p on d^k dimensions
struct CssProjector {
  DefectSubspace subspace;
  MatrixXcd matrix;
};

inline CssProjector css_projector(const DefectSubspace& a) {
  const int64_t dim = ipow(a.d, a.k);
  if (dim > (1 << 14)) throw ResourceError("css_projector: d^k exceeds 2^14");
  MatrixXcd q = MatrixXcd::Zero(dim, dim);
  for (const auto& zq : a.elements)
    for (const auto& xp : a.elements) {
      // Z_q X_p |x> = omega^{q.(x+p)} |x+p>
      for (int64_t col = 0; col < dim; ++col) {
        Vec x = defect_detail::decode(col, a.d, a.k);
        long long phase = 0;
        Vec y(a.k);
        for (int i = 0; i < a.k; ++i) {
          y[i] = (x[i] + xp[i]) % a.d;
          phase += static_cast<long long>(zq[i]) * y[i];
        }
        q(defect_detail::encode(y, a.d), col) += root_of_unity(a.d, phase);
      }
    }
  q /= static_cast<double>(a.size()) * static_cast<double>(a.size());
  return CssProjector{a, std::move(q)};
}

// Overlaps c_pi = tr(r(A) r(T_pi)) for every pi in S_k, as exact integers.
// r(A)[x, y] = [x - y in A][x in A_perp], so the trace counts
// #{x in A_perp : x - pi(x) in A}.
struct OverlapTable {
  DefectSubspace subspace;
  std::vector<std::vector<int>> perms;  // lexicographic one-line order
  std::vector<long long> values;

  long long value_at(const std::vector<int>& perm) const {
    const auto it = std::lower_bound(perms.begin(), perms.end(), perm);
    if (it == perms.end() || *it != perm) throw UsageError("OverlapTable: unknown permutation");
    return values[static_cast<size_t>(it - perms.begin())];
  }
};

inline OverlapTable css_overlap_table(const DefectSubspace& a) {
  const int64_t dim = ipow(a.d, a.k);
  if (dim > (1 << 20)) throw ResourceError("css_overlap_table: d^k too large");
  std::set<int64_t> in_a;
  for (const auto& e : a.elements) in_a.insert(defect_detail::encode(e, a.d));

  std::vector<int64_t> perp;
  for (int64_t n = 0; n < dim; ++n) {
    Vec x = defect_detail::decode(n, a.d, a.k);
    bool ok = true;
    for (const auto& e : a.elements)
      if (defect_detail::dot_mod(x, e, a.d) != 0) { ok = false; break; }
    if (ok) perp.push_back(n);
  }

  OverlapTable table;
  table.subspace = a;
  std::vector<int> perm(a.k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    long long count = 0;
    for (int64_t n : perp) {
      Vec x = defect_detail::decode(n, a.d, a.k);
      Vec y(a.k);
      for (int i = 0; i < a.k; ++i) y[perm[i]] = x[i];
      Vec diff(a.k);
      for (int i = 0; i < a.k; ++i) diff[i] = ((x[i] - y[i]) % a.d + a.d) % a.d;
      if (in_a.count(defect_detail::encode(diff, a.d))) ++count;
    }
    table.perms.push_back(perm);
    table.values.push_back(count);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return table;
}

}  // namespace magicflow

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "magicflow/css_exact.hpp"
#include "magicflow/defect.hpp"

using namespace magicflow;

namespace {

double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

int cycle_count(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int c = 0;
  for (size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++c;
    size_t j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = perm[j];
    }
  }
  return c;
}

bool is_full_cycle(const std::vector<int>& perm) {
  return cycle_count(perm) == 1;
}

bool is_double_transposition(const std::vector<int>& perm) {
  if (perm.size() != 4) return false;
  int moved = 0;
  for (size_t i = 0; i < perm.size(); ++i) moved += perm[i] != static_cast<int>(i);
  return moved == 4 && cycle_count(perm) == 2;
}

// independent census of 1- and 2-dimensional defect subspaces by direct
// enumeration of all vectors and all pairs
std::pair<int, int> brute_census(int d, int k) {
  const int D = replica_count(d);
  std::vector<Vec> valid;
  for (int64_t n = 1; n < ipow(d, k); ++n) {
    Vec v = defect_detail::decode(n, d, k);
    if (defect_detail::satisfies_conditions(v, d, D)) valid.push_back(v);
  }
  std::set<std::vector<int64_t>> one, two;
  auto span_key = [&](const std::vector<Vec>& gens) {
    auto elems = defect_detail::span_elements(gens, d, k);
    for (const auto& e : elems)
      if (!defect_detail::satisfies_conditions(e, d, D)) return std::vector<int64_t>{};
    std::vector<int64_t> key;
    for (const auto& e : elems) key.push_back(defect_detail::encode(e, d));
    return key;
  };
  for (const auto& v : valid) {
    auto key = span_key({v});
    if (!key.empty()) one.insert(key);
  }
  for (size_t i = 0; i < valid.size(); ++i)
    for (size_t j = i + 1; j < valid.size(); ++j) {
      std::vector<Vec> gens = {valid[i], valid[j]};
      if (defect_detail::rank_mod_d(gens, d) != 2) continue;
      auto key = span_key(gens);
      if (!key.empty() && key.size() == static_cast<size_t>(d) * d) two.insert(key);
    }
  return {static_cast<int>(one.size()), static_cast<int>(two.size())};
}

}  // namespace

TEST_CASE("defect subspace validation") {
  SECTION("span{1111} at d=2 is valid") {
    auto a = DefectSubspace::from_generators(2, 4, {{1, 1, 1, 1}});
    REQUIRE(validate_defect_subspace(a));
    REQUIRE(a.r_A == 1);
    REQUIRE(a.size() == 2);
  }
  SECTION("span{11111} at d=2, k=5 is invalid") {
    auto a = DefectSubspace::from_generators(2, 5, {{1, 1, 1, 1, 1}});
    REQUIRE_FALSE(validate_defect_subspace(a));
  }
  SECTION("span{111} at d=3 is valid") {
    auto a = DefectSubspace::from_generators(3, 3, {{1, 1, 1}});
    REQUIRE(validate_defect_subspace(a));
    REQUIRE(a.size() == 3);
  }
  SECTION("trivial and full spans are invalid") {
    auto zero = DefectSubspace::from_generators(2, 4, {});
    REQUIRE_FALSE(validate_defect_subspace(zero));
  }
}

TEST_CASE("defect subspace census") {
  SECTION("d=2, k=4: unique subspace span{1111}") {
    auto subs = find_defect_subspaces(2, 4);
    REQUIRE(subs.size() == 1);
    REQUIRE(subs[0].elements == std::vector<Vec>{{0, 0, 0, 0}, {1, 1, 1, 1}});
  }
  SECTION("d=2, k=5: five one-dimensional subspaces") {
    auto subs = find_defect_subspaces(2, 5);
    REQUIRE(subs.size() == 5);
    for (const auto& a : subs) REQUIRE(a.r_A == 1);
  }
  SECTION("d=2, k=6 census matches independent pair enumeration") {
    auto subs = find_defect_subspaces(2, 6);
    int one = 0, two = 0;
    for (const auto& a : subs) {
      if (a.r_A == 1) ++one;
      if (a.r_A == 2) ++two;
    }
    auto [bone, btwo] = brute_census(2, 6);
    REQUIRE(one == bone);
    REQUIRE(two == btwo);
    REQUIRE(one == 15);
    // every pair of weight-4 vectors with even overlap spans a valid
    // subspace; the pairs group into perfect matchings of the six replicas
    REQUIRE(two == 15);
    REQUIRE(subs.size() == static_cast<size_t>(one + two));
  }
  SECTION("d=3, k=3 contains span{111} only") {
    auto subs = find_defect_subspaces(3, 3);
    REQUIRE(subs.size() == 1);
    REQUIRE(subs[0].elements == std::vector<Vec>{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}});
  }
  SECTION("d=7, k=3 contains span{(1,2,4)}") {
    auto subs = find_defect_subspaces(7, 3);
    bool found = false;
    for (const auto& a : subs)
      for (const auto& e : a.elements) found |= (e == Vec{1, 2, 4});
    REQUIRE(found);
  }
  SECTION("output is deterministic, canonically sorted, and validated") {
    auto s1 = find_defect_subspaces(2, 6);
    auto s2 = find_defect_subspaces(2, 6);
    REQUIRE(s1.size() == s2.size());
    for (size_t i = 0; i < s1.size(); ++i) {
      REQUIRE(s1[i].elements == s2[i].elements);
      REQUIRE(validate_defect_subspace(s1[i]));
    }
  }
  SECTION("guards") {
    REQUIRE_THROWS_AS(find_defect_subspaces(2, 7), UsageError);
  }
}

TEST_CASE("css projector") {
  SECTION("matches the sum of explicit pauli string matrices") {
    auto a = DefectSubspace::y_family(2);
    auto proj = css_projector(a);
    MatrixXcd expect = MatrixXcd::Zero(16, 16);
    for (const auto& q : a.elements)
      for (const auto& p : a.elements)
        expect += pauli_string_matrix(PauliString(2, q, p));
    expect /= static_cast<double>(a.size() * a.size());
    REQUIRE(max_abs(proj.matrix - expect) < 1e-12);
  }
  SECTION("hermitian, idempotent, trace d^(k - 2 r_A)") {
    for (int d : {2, 3}) {
      auto a = DefectSubspace::y_family(d);
      auto proj = css_projector(a);
      REQUIRE(max_abs(proj.matrix - proj.matrix.adjoint()) < 1e-10);
      REQUIRE(max_abs(proj.matrix * proj.matrix - proj.matrix) < 1e-12);
      const double expect_trace = std::pow(double(d), a.k - 2 * a.r_A);
      REQUIRE(std::abs(proj.matrix.trace().real() - expect_trace) < 1e-8);
      REQUIRE(std::abs(proj.matrix.trace().imag()) < 1e-10);
    }
    auto k6 = find_defect_subspaces(2, 6);
    for (const auto& a : k6) {
      auto proj = css_projector(a);
      REQUIRE(max_abs(proj.matrix * proj.matrix - proj.matrix) < 1e-12);
      const double expect_trace = std::pow(2.0, a.k - 2 * a.r_A);
      REQUIRE(std::abs(proj.matrix.trace().real() - expect_trace) < 1e-8);
    }
  }
  SECTION("r(A) equals |A| Q_A") {
    for (int d : {2, 3}) {
      auto a = DefectSubspace::y_family(d);
      auto proj = css_projector(a);
      const Eigen::MatrixXd r = r_matrix(a);
      REQUIRE((r.cast<Complex>() - double(a.size()) * proj.matrix).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SECTION("css group elements commute and close under multiplication") {
    for (int d : {2, 3}) {
      auto a = DefectSubspace::y_family(d);
      std::vector<MatrixXcd> ops;
      for (const auto& q : a.elements)
        for (const auto& p : a.elements)
          ops.push_back(pauli_string_matrix(PauliString(d, q, p)));
      for (const auto& u : ops)
        for (const auto& v : ops) {
          REQUIRE(max_abs(u * v - v * u) < 1e-12);
          // product is again in the group up to phase
          MatrixXcd w = u * v;
          bool matched = false;
          for (const auto& o : ops) {
            const Complex lambda = (o.adjoint() * w).trace() / double(w.rows());
            if (std::abs(std::abs(lambda) - 1.0) < 1e-9 &&
                max_abs(w - lambda * o) < 1e-9) {
              matched = true;
              break;
            }
          }
          REQUIRE(matched);
        }
    }
  }
}

TEST_CASE("overlap tables") {
  SECTION("d=2 values follow the cycle case formula") {
    auto table = css_overlap_table(DefectSubspace::y_family(2));
    for (size_t i = 0; i < table.perms.size(); ++i) {
      const auto& perm = table.perms[i];
      long long expect;
      bool identity = cycle_count(perm) == 4;
      if (identity)
        expect = 8;  // d^(D-1)
      else if (is_full_cycle(perm))
        expect = 4;  // d^2
      else if (is_double_transposition(perm))
        expect = 8;  // d^3 at d=2
      else
        expect = 1LL << (cycle_count(perm) - 1);
      REQUIRE(table.values[i] == expect);
    }
  }
  SECTION("d=3 values: identity 9, 3-cycles 9, transpositions 3") {
    auto table = css_overlap_table(DefectSubspace::y_family(3));
    for (size_t i = 0; i < table.perms.size(); ++i) {
      const int c = cycle_count(table.perms[i]);
      const long long expect = c == 3 ? 9 : (c == 1 ? 9 : 3);
      REQUIRE(table.values[i] == expect);
    }
  }
  SECTION("integer counting equals the explicit matrix trace") {
    for (int d : {2, 3}) {
      auto a = DefectSubspace::y_family(d);
      auto table = css_overlap_table(a);
      const Eigen::MatrixXd r = r_matrix(a);
      const int64_t dim = ipow(d, a.k);
      for (size_t i = 0; i < table.perms.size(); ++i) {
        const auto& perm = table.perms[i];
        Eigen::MatrixXd rp = Eigen::MatrixXd::Zero(dim, dim);
        for (int64_t x = 0; x < dim; ++x) {
          Vec xv = defect_detail::decode(x, d, a.k);
          Vec yv(a.k);
          for (int j = 0; j < a.k; ++j) yv[perm[j]] = xv[j];
          rp(defect_detail::encode(yv, d), x) = 1.0;
        }
        const double tr = (r * rp).trace();
        REQUIRE(std::llround(tr) == table.values[i]);
      }
    }
  }
  SECTION("identity value is d^(D-1) for the Y_d family") {
    for (int d : {2, 3}) {
      auto table = css_overlap_table(DefectSubspace::y_family(d));
      std::vector<int> id(table.subspace.k);
      std::iota(id.begin(), id.end(), 0);
      REQUIRE(table.value_at(id) == ipow(d, replica_count(d) - 1));
    }
  }
}

#include <catch2/catch_amalgamated.hpp>

#include "magicflow/css_exact.hpp"
#include "magicflow/replica_tn.hpp"
#include "magicflow/statevector.hpp"
#include "tn_dense_oracle.hpp"

using namespace magicflow;

TEST_CASE("gate tensor structure") {
  SECTION("haar projector stability: averaging twice equals averaging once") {
    for (int d : {2, 3}) {
      const ReplicaTensors rt = build_replica_tensors(d);
      const int q = rt.table.order();
      // boundary pair -> boundary pair
      for (int tau = 0; tau < q; ++tau) {
        double acc = 0;
        for (int p = 0; p < q; ++p) acc += rt.gate.k[tau](p, p);
        REQUIRE(std::abs(acc - 1.0) < 1e-10);
      }
      // double application on random diagonal-supported vectors
      RngStream rng(4 + d);
      Eigen::VectorXd v(q);
      for (int i = 0; i < q; ++i) v(i) = rng.next_double() - 0.5;
      Eigen::VectorXd once(q), twice(q);
      for (int tau = 0; tau < q; ++tau) {
        double acc = 0;
        for (int p = 0; p < q; ++p) acc += rt.gate.k[tau](p, p) * v(p);
        once(tau) = acc;
      }
      for (int tau = 0; tau < q; ++tau) {
        double acc = 0;
        for (int p = 0; p < q; ++p) acc += rt.gate.k[tau](p, p) * once(p);
        twice(tau) = acc;
      }
      REQUIRE((twice - once).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SECTION("gate entries finite, gate not an isometry") {
    const ReplicaTensors rt = build_replica_tensors(2);
    double frob = 0;
    for (const auto& k : rt.gate.k) {
      REQUIRE(k.allFinite());
      frob += k.squaredNorm();
    }
    REQUIRE(std::abs(frob - 1.0) > 1e-3);
  }
  SECTION("top tensor values by conjugacy class at d=2") {
    const ReplicaTensors rt = build_replica_tensors(2);
    std::map<long long, int> counts;
    for (int i = 0; i < rt.table.order(); ++i)
      counts[std::llround(rt.top.c(i))]++;
    REQUIRE(counts[8] == 4);   // identity + 3 double transpositions
    REQUIRE(counts[4] == 12);  // 6 transpositions + 6 four-cycles
    REQUIRE(counts[2] == 8);   // 8 three-cycles
    // single-site closure on the identity spin
    REQUIRE(std::llround(rt.top.c(0)) == 8);  // d^(D-1)
  }
}

TEST_CASE("t=1 closed form") {
  // per-pair Upsilon is 4/7 at d=2 and 3/11 at d=3
  for (int n : {4, 16, 64}) {
    const double lu2 = contract_annealed_upsilon(n, 1, 2, 64).log_upsilon;
    REQUIRE(std::abs(lu2 - 0.5 * n * std::log(4.0 / 7.0)) < 1e-10);
    const double lu3 = contract_annealed_upsilon(n, 1, 3, 36).log_upsilon;
    REQUIRE(std::abs(lu3 - 0.5 * n * std::log(3.0 / 11.0)) < 1e-10);
  }
}

TEST_CASE("N=2 gives the two-site haar value at any depth") {
  for (int t : {1, 2, 3, 6}) {
    REQUIRE(std::abs(contract_annealed_upsilon(2, t, 2, 64).log_upsilon -
                     std::log(4.0 / 7.0)) < 1e-10);
    REQUIRE(std::abs(contract_annealed_upsilon(2, t, 3, 36).log_upsilon -
                     std::log(3.0 / 11.0)) < 1e-10);
  }
}

TEST_CASE("mps contraction matches the dense-vector oracle") {
  SECTION("d=2, N=4, t <= 3 at full bond dimension") {
    for (int t : {1, 2, 3}) {
      const double dense = test_oracle::dense_log_upsilon(4, t, 2);
      const auto res = contract_annealed_upsilon(4, t, 2, 4096);
      REQUIRE(std::abs(res.log_upsilon - dense) < 1e-8);
      REQUIRE(res.diag.discarded_weight < 1e-12);
    }
  }
  SECTION("d=3, N=4 and N=6, deeper circuits") {
    for (int n : {4, 6})
      for (int t = 1; t <= 6; ++t) {
        const double dense = test_oracle::dense_log_upsilon(n, t, 3);
        const auto res = contract_annealed_upsilon(n, t, 3, 4096);
        REQUIRE(std::abs(res.log_upsilon - dense) < 1e-8);
      }
  }
}

TEST_CASE("deep circuits saturate to the haar value") {
  // E[Upsilon] -> sum_pi c_pi^N / prod(d^N + j)
  for (int d : {2, 3}) {
    const int n = 6;
    const ReplicaTensors rt = build_replica_tensors(d);
    double num = 0;
    for (int i = 0; i < rt.table.order(); ++i) num += std::pow(rt.top.c(i), n);
    double den = 1;
    for (int j = 0; j < rt.D; ++j) den *= (std::pow(double(d), n) + j);
    const double haar = std::log(num / den);
    const double deep = contract_annealed_upsilon(n, 4 * n, d, 1024).log_upsilon;
    REQUIRE(std::abs(deep - haar) < 1e-6);
  }
}

TEST_CASE("monotone approach to saturation") {
  double prev = -1e300;
  for (int t = 1; t <= 8; ++t) {
    const double y = annealed_css_entropy(8, t, 3, 72);
    REQUIRE(y >= prev - 1e-8);
    prev = y;
  }
}

TEST_CASE("gate tensor against a monte-carlo statevector oracle") {
  // d=3, N=2: boundary with gate and top equals the two-site haar average
  RngStream rng(20240817);
  const int samples = 100000;
  double sum = 0, sum2 = 0;
  const DefectSubspace a3 = DefectSubspace::y_family(3);
  for (int i = 0; i < samples; ++i) {
    StateVector s = haar_random_state(3, 2, rng);
    const double u = css_upsilon_pauli_spectrum(s);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
  const double tn = std::exp(contract_annealed_upsilon(2, 2, 3, 36).log_upsilon);
  REQUIRE(std::abs(mean - tn) < 3 * se);
  REQUIRE(std::abs(tn - 3.0 / 11.0) < 1e-12);
}

TEST_CASE("input validation") {
  REQUIRE_THROWS_AS(contract_annealed_upsilon(5, 1, 2, 16), UsageError);
  REQUIRE_THROWS_AS(contract_annealed_upsilon(4, 0, 2, 16), UsageError);
  REQUIRE_THROWS_AS(contract_annealed_upsilon(4, 1, 2, 0), UsageError);
}

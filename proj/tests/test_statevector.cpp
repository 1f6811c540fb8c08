#include <catch2/catch_amalgamated.hpp>

#include "magicflow/haar_random.hpp"
#include "magicflow/statevector.hpp"

using namespace magicflow;

TEST_CASE("zero state initialization") {
  StateVector s = init_zero_state(2, 2);
  REQUIRE(s.amp == std::vector<Complex>{Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0)});
  StateVector t = init_zero_state(3, 1);
  REQUIRE(t.amp.size() == 3);
  REQUIRE(t.amp[0] == Complex(1, 0));
  REQUIRE_THROWS_AS(init_zero_state(2, 40), ResourceError);
  REQUIRE_THROWS_AS(init_zero_state(6, 2), UsageError);
}

TEST_CASE("two-site gate application") {
  SECTION("identity leaves the state bit-exact") {
    RngStream rng(1);
    StateVector s = run_brickwall({2, 4, 2, 5, 1}, rng);
    StateVector before = s;
    apply_two_site_gate(s, MatrixXcd::Identity(4, 4), 1);
    REQUIRE(s.amp == before.amp);
  }
  SECTION("swap maps |01> to |10>") {
    StateVector s = init_zero_state(2, 2);
    s.amp.assign({Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0)});
    MatrixXcd swap = MatrixXcd::Zero(4, 4);
    swap(0, 0) = swap(2, 1) = swap(1, 2) = swap(3, 3) = Complex(1, 0);
    apply_two_site_gate(s, swap, 0);
    REQUIRE(std::abs(s.amp[2] - Complex(1, 0)) < 1e-15);
    REQUIRE(std::abs(s.amp[1]) < 1e-15);
  }
  SECTION("U then U-dagger restores the state") {
    for (int d : {2, 3}) {
      RngStream rng(7 + d);
      StateVector s = init_zero_state(d, 3);
      // scramble first
      apply_two_site_gate(s, random_haar_unitary(d * d, rng), 0);
      apply_two_site_gate(s, random_haar_unitary(d * d, rng), 1);
      StateVector before = s;
      MatrixXcd u = random_haar_unitary(d * d, rng);
      apply_two_site_gate(s, u, 1);
      apply_two_site_gate(s, MatrixXcd(u.adjoint()), 1);
      double err = 0;
      for (size_t i = 0; i < s.amp.size(); ++i)
        err = std::max(err, std::abs(s.amp[i] - before.amp[i]));
      REQUIRE(err < 1e-12);
      REQUIRE(std::abs(s.norm() - 1.0) < 1e-12);
    }
  }
  SECTION("index and dimension validation") {
    StateVector s = init_zero_state(2, 3);
    REQUIRE_THROWS_AS(apply_two_site_gate(s, MatrixXcd::Identity(4, 4), 2), UsageError);
    REQUIRE_THROWS_AS(apply_two_site_gate(s, MatrixXcd::Identity(3, 3), 0), UsageError);
  }
}

TEST_CASE("pauli expectation values") {
  SECTION("zero state: all-Z strings give one, any shift gives zero") {
    StateVector s = init_zero_state(2, 4);
    REQUIRE(std::abs(pauli_expectation(s, PauliString(2, {1, 1, 0, 1}, {0, 0, 0, 0})) -
                     Complex(1, 0)) < 1e-15);
    REQUIRE(std::abs(pauli_expectation(s, PauliString(2, {0, 0, 0, 0}, {0, 1, 0, 0}))) < 1e-15);
  }
  SECTION("single-qubit T-state bloch components") {
    StateVector s = init_zero_state(2, 1);
    const double r = 1.0 / std::sqrt(2.0);
    s.amp = {Complex(r, 0), r * std::exp(Complex(0, M_PI / 4))};
    const Complex x = pauli_expectation(s, PauliString(2, {0}, {1}));
    const Complex zx = pauli_expectation(s, PauliString(2, {1}, {1}));
    const Complex z = pauli_expectation(s, PauliString(2, {1}, {0}));
    REQUIRE(std::abs(x - Complex(r, 0)) < 1e-14);
    // Y = -i Z X, so <Y> = -i <ZX>
    REQUIRE(std::abs(Complex(0, -1) * zx - Complex(r, 0)) < 1e-14);
    REQUIRE(std::abs(z) < 1e-14);
  }
  SECTION("agrees with the dense-matrix trace for random states, N <= 4") {
    for (int d : {2, 3}) {
      RngStream rng(17 * d);
      const int n = d == 2 ? 4 : 3;
      StateVector s = haar_random_state(d, n, rng);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<int> q(n), p(n);
        for (int i = 0; i < n; ++i) {
          q[i] = static_cast<int>(rng.next_index(d));
          p[i] = static_cast<int>(rng.next_index(d));
        }
        PauliString str(d, q, p);
        const Complex fast = pauli_expectation(s, str);
        MatrixXcd m = pauli_string_matrix(str);
        Eigen::Map<const Eigen::VectorXcd> psi(s.amp.data(), s.dim());
        const Complex dense = psi.adjoint() * (m * psi);
        REQUIRE(std::abs(fast - dense) < 1e-10);
      }
    }
  }
  SECTION("dimension mismatch rejected") {
    StateVector s = init_zero_state(2, 3);
    REQUIRE_THROWS_AS(pauli_expectation(s, PauliString::identity(2, 4)), UsageError);
    REQUIRE_THROWS_AS(pauli_expectation(s, PauliString::identity(3, 3)), UsageError);
  }
}

TEST_CASE("brick-wall circuits") {
  SECTION("depth zero returns the zero state") {
    RngStream rng(3);
    StateVector s = run_brickwall({2, 6, 0, 3, 1}, rng);
    REQUIRE(std::abs(s.amp[0] - Complex(1, 0)) < 1e-15);
  }
  SECTION("norm preserved across many layers") {
    RngStream rng(5);
    for (int d : {2, 3}) {
      StateVector s = run_brickwall({d, 4, 12, 9, 1}, rng);
      REQUIRE(std::abs(s.norm() - 1.0) < 1e-10);
    }
  }
  SECTION("odd N rejected") {
    RngStream rng(6);
    CircuitSpec spec{2, 5, 1, 0, 1};
    REQUIRE_THROWS_AS(run_brickwall(spec, rng), UsageError);
  }
}

TEST_CASE("tensor product helper") {
  RngStream rng(8);
  StateVector a = haar_random_state(2, 2, rng);
  StateVector b = haar_random_state(2, 1, rng);
  StateVector ab = tensor_product(a, b);
  REQUIRE(ab.N == 3);
  REQUIRE(std::abs(ab.amp[0b101] - a.amp[0b10] * b.amp[1]) < 1e-15);
  REQUIRE(std::abs(ab.norm() - 1.0) < 1e-12);
}

#pragma once

#include <cstdint>
#include <string>

#include "magicflow/errors.hpp"

namespace magicflow {

inline bool is_prime(int d) {
  if (d < 2) return false;
  for (int f = 2; f * f <= d; ++f)
    if (d % f == 0) return false;
  return true;
}

inline void require_prime(int d) {
  if (!is_prime(d))
    throw UsageError("qudit dimension d = " + std::to_string(d) + " is not prime");
}

// replica count of the Y_d family: D = 2d for even d, D = d for odd d
inline int replica_count(int d) { return d % 2 == 0 ? 2 * d : d; }

inline int64_t ipow(int64_t base, int exp) {
  int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// scalar in Z_d, d prime
struct FieldScalar {
  int value;
  int modulus;

  FieldScalar(int v, int d) : value(((v % d) + d) % d), modulus(d) { require_prime(d); }

  FieldScalar operator+(const FieldScalar& o) const {
    return FieldScalar(value + o.value, modulus);
  }
  FieldScalar operator*(const FieldScalar& o) const {
    return FieldScalar(value * o.value, modulus);
  }
  FieldScalar operator-() const { return FieldScalar(modulus - value, modulus); }
  bool operator==(const FieldScalar& o) const {
    return value == o.value && modulus == o.modulus;
  }

  // multiplicative inverse via Fermat's little theorem
  FieldScalar inverse() const {
    int r = 1, b = value, e = modulus - 2;
    while (e > 0) {
      if (e & 1) r = r * b % modulus;
      b = b * b % modulus;
      e >>= 1;
    }
    return FieldScalar(r, modulus);
  }
};

inline int mod_inverse(int a, int d) { return FieldScalar(a, d).inverse().value; }

}  // namespace magicflow

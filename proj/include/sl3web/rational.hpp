#pragma once

#include <gmpxx.h>

#include <array>
#include <random>
#include <string>

#include "sl3web/common.hpp"

namespace sl3web {

using Rat = mpq_class;
using Int = mpz_class;

using Vec3 = std::array<Rat, 3>;
using Mat3 = std::array<std::array<Rat, 3>, 3>;

inline Rat parse_rat(const std::string& s) {
  try {
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Sl3Error(ErrorCode::BadInput, "not a rational: '" + s + "'");
  }
}

inline std::string format_rat(const Rat& r) { return r.get_str(); }

inline Mat3 identity3() {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = (i == j) ? 1 : 0;
  return m;
}

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Rat s = 0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      c[i][j] = s;
    }
  return c;
}

inline Vec3 matvec(const Mat3& a, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) {
    Rat s = 0;
    for (int k = 0; k < 3; ++k) s += a[i][k] * v[k];
    r[i] = s;
  }
  return r;
}

inline Rat det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// adjugate(M) = det(M) * M^{-1}; equals the inverse when det = 1.
inline Mat3 adjugate3(const Mat3& m) {
  Mat3 a{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      a[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    }
  return a;
}

inline Rat det3cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    m[i][0] = c0[i];
    m[i][1] = c1[i];
    m[i][2] = c2[i];
  }
  return det3(m);
}

// Sign of the permutation (i,j,k) of {0,1,2}; 0 if any repeat.
inline int epsilon3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

// Deterministic test-point generator. All randomness in the library flows
// from explicit 64-bit seeds.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  int64_t int_in(int64_t lo, int64_t hi) {
    std::uniform_int_distribution<int64_t> d(lo, hi);
    return d(eng_);
  }

  // Nonzero numerator, small denominator; magnitude bounds |num|.
  Rat rat(int magnitude) {
    int64_t num = 0;
    while (num == 0) num = int_in(-magnitude, magnitude);
    int64_t den = int_in(1, magnitude);
    Rat r(num, den);
    r.canonicalize();
    return r;
  }

  Vec3 vec3(int magnitude) { return Vec3{rat(magnitude), rat(magnitude), rat(magnitude)}; }

  uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace sl3web

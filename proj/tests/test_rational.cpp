#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sl3web/rational.hpp"

using namespace sl3web;

TEST_CASE("rational parse and format") {
  CHECK(parse_rat("3/4") == Rat(3, 4));
  CHECK(parse_rat("-7") == Rat(-7));
  CHECK(parse_rat("6/4") == Rat(3, 2));
  CHECK(format_rat(Rat(3, 2)) == "3/2");
  CHECK(format_rat(Rat(-5)) == "-5");
  CHECK_THROWS_AS(parse_rat("x/y"), Sl3Error);
}

TEST_CASE("matrix determinant and adjugate") {
  Mat3 m = identity3();
  CHECK(det3(m) == 1);
  m[0][1] = Rat(5);
  m[2][0] = Rat(-3, 2);
  Mat3 a = adjugate3(m);
  // M * adj(M) = det(M) * I
  Mat3 p = matmul(m, a);
  Rat d = det3(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(p[i][j] == (i == j ? d : Rat(0)));
}

TEST_CASE("column determinant helper") {
  Vec3 e0{Rat(1), Rat(0), Rat(0)};
  Vec3 e1{Rat(0), Rat(1), Rat(0)};
  Vec3 e2{Rat(0), Rat(0), Rat(1)};
  CHECK(det3cols(e0, e1, e2) == 1);
  CHECK(det3cols(e1, e0, e2) == -1);
  CHECK(det3cols(e0, e0, e2) == 0);
}

TEST_CASE("epsilon3") {
  CHECK(epsilon3(0, 1, 2) == 1);
  CHECK(epsilon3(1, 2, 0) == 1);
  CHECK(epsilon3(0, 2, 1) == -1);
  CHECK(epsilon3(0, 0, 1) == 0);
}

TEST_CASE("rng determinism") {
  Rng r1(42), r2(42);
  for (int i = 0; i < 10; ++i) CHECK(r1.rat(5) == r2.rat(5));
  Rng r3(43);
  bool same = true;
  Rng r4(42);
  for (int i = 0; i < 10; ++i) same = same && (r3.rat(5) == r4.rat(5));
  CHECK_FALSE(same);
}

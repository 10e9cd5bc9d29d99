#include <doctest.h>

#include "qmix/groups.hpp"
#include "qmix/io.hpp"
#include "support.hpp"

using namespace qmix;

TEST_CASE("perm_compose and perm_inverse") {
  const auto s3 = symmetric_group(3);
  // Q4 Q5 = Q2
  CHECK(perm_compose(s3.perm(3), s3.perm(4)) == s3.perm(1));
  const Perm p({2, 3, 1});
  CHECK(perm_compose(Perm::identity(3), p) == p);
  const Perm t({2, 1, 3});
  CHECK(perm_compose(t, t).is_identity());
  CHECK(perm_inverse(s3.perm(1)) == s3.perm(2));
  CHECK(perm_inverse(Perm::identity(4)).is_identity());
  for (int g = 3; g < 6; ++g) CHECK(perm_inverse(s3.perm(g)) == s3.perm(g));
  CHECK_THROWS_AS(perm_compose(Perm({1, 2}), Perm({1, 2, 3})), InvalidArgument);
  CHECK_THROWS_AS(Perm({1, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(Perm({0, 1}), InvalidArgument);
}

TEST_CASE("symmetric_group order and S3 ordering") {
  CHECK(symmetric_group(1).order() == 1);
  CHECK(symmetric_group(3).order() == 6);
  CHECK(symmetric_group(4).order() == 24);
  CHECK(symmetric_group(5).order() == 120);
  CHECK_THROWS_AS(symmetric_group(0), InvalidArgument);
  CHECK_THROWS_AS(symmetric_group(6), InvalidArgument);

  const auto s3 = symmetric_group(3);
  CHECK(s3.identity() == 0);
  // Q2 |a, b, c> = |b, c, a>: slot 1 receives slot 2, so pi^-1(1) = 2.
  CHECK(perm_inverse(s3.perm(1))(1) == 2);
  for (int g = 0; g < 6; ++g) CHECK(s3.label(g) == "Q" + std::to_string(g + 1));
  // 3-cycles then transpositions
  for (int g = 1; g <= 2; ++g) CHECK(s3.mul(g, s3.mul(g, g)) == 0);
  for (int g = 3; g <= 5; ++g) CHECK(s3.mul(g, g) == 0);
}

TEST_CASE("cyclic_group") {
  const auto z2 = cyclic_group(2);
  CHECK(z2.label(0) == "I");
  CHECK(z2.label(1) == "X");
  CHECK(z2.mul(1, 1) == 0);
  CHECK(cyclic_group(1).order() == 1);
  const auto z3 = cyclic_group(3);
  CHECK(z3.mul(1, 1) != 0);
  CHECK(z3.mul(1, z3.mul(1, 1)) == 0);
}

TEST_CASE("invalid Cayley tables are rejected") {
  CHECK_THROWS_AS(FiniteGroup({{0, 1}, {0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(FiniteGroup({{0, 1, 2}, {1, 2, 0}}), InvalidArgument);
  // Latin square without associativity: a loop of order 5.
  CHECK_THROWS_AS(FiniteGroup({{0, 1, 2, 3, 4},
                               {1, 0, 3, 4, 2},
                               {2, 4, 0, 1, 3},
                               {3, 2, 4, 0, 1},
                               {4, 3, 1, 2, 0}}),
                  InvalidArgument);
}

TEST_CASE("left regular representation of S3 matches the integer layout") {
  const auto s3 = symmetric_group(3);
  CMatrix sum = CMatrix::Zero(6, 6);
  for (int k = 0; k < 6; ++k) sum += static_cast<double>(k + 1) * left_regular(s3, k);
  const int expected[6][6] = {{1, 3, 2, 4, 5, 6}, {2, 1, 3, 6, 4, 5}, {3, 2, 1, 5, 6, 4},
                              {4, 6, 5, 1, 2, 3}, {5, 4, 6, 3, 1, 2}, {6, 5, 4, 2, 3, 1}};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(sum(i, j).real() == expected[i][j]);
  CHECK(qtest::maxdiff(left_regular(s3, 0), CMatrix::Identity(6, 6)) == 0.0);
}

TEST_CASE("regular representation properties") {
  for (const auto& g : {symmetric_group(3), cyclic_group(2), cyclic_group(5), symmetric_group(4)}) {
    const int n = g.order();
    CMatrix support = CMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
      const CMatrix la = left_regular(g, a);
      support += la;
      CHECK(std::abs(la.trace() - cplx(a == g.identity() ? n : 0)) < 1e-12);
      for (int b = 0; b < n; ++b) {
        const CMatrix lb = left_regular(g, b);
        CHECK(qtest::maxdiff(la * lb, left_regular(g, g.mul(a, b))) == 0.0);
        CHECK(std::abs((la.adjoint() * lb).trace() - cplx(a == b ? n : 0)) < 1e-12);
        const CMatrix rb = right_regular(g, b);
        CHECK(qtest::maxdiff(la * rb, rb * la) == 0.0);
      }
    }
    // disjoint supports tile the square
    CHECK(qtest::maxdiff(support, CMatrix::Ones(n, n)) == 0.0);
  }
  const auto z2 = cyclic_group(2);
  for (int g = 0; g < 2; ++g) CHECK(qtest::maxdiff(right_regular(z2, g), left_regular(z2, z2.inverse(g)).transpose()) == 0.0);
  CHECK(qtest::maxdiff(right_regular(symmetric_group(3), 0), CMatrix::Identity(6, 6)) == 0.0);
}

TEST_CASE("regular_lincomb") {
  const auto s3 = symmetric_group(3);
  CHECK(qtest::maxdiff(regular_lincomb(CoeffVector::indicator(s3, 0)), CMatrix::Identity(6, 6)) == 0.0);
  CVector z = CVector::Constant(6, 1.0 / 6.0);
  const CMatrix m = regular_lincomb(CoeffVector(s3, z));
  CHECK(qtest::maxdiff(m * m, m) < 1e-15);
  CHECK(std::abs(m.trace() - cplx(1.0)) < 1e-15);
  CHECK_THROWS_AS(CoeffVector(s3, CVector::Zero(5)), InvalidArgument);
}

TEST_CASE("groups load from JSON") {
  const json j = json::parse(R"({"order": 3, "table": [[0,1,2],[1,2,0],[2,0,1]]})");
  const auto g = group_from_json(j);
  CHECK(g.order() == 3);
  CHECK(g.mul(2, 2) == 1);
  const auto back = group_from_json(group_to_json(symmetric_group(3)));
  CHECK(back.order() == 6);
  CHECK(back.mul(3, 4) == 1);
  CHECK_THROWS_AS(group_from_json(json::parse(R"({"order": 2, "table": [[0,1],[0,1]]})")), InvalidArgument);
}

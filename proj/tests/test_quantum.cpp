#include <doctest.h>

#include "qmix/io.hpp"
#include "qmix/quantum.hpp"
#include "qmix/repr.hpp"
#include "support.hpp"

using namespace qmix;
using qtest::maxdiff;

namespace {

CMatrix ket_bra(int d, int i) {
  CMatrix m = CMatrix::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("DensityMatrix validation") {
  CHECK_NOTHROW(DensityMatrix(ket_bra(2, 0)));
  CHECK_THROWS_AS(DensityMatrix(2.0 * ket_bra(2, 0)), ConstraintViolation);
  CMatrix nh = ket_bra(2, 0);
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{nh}, ConstraintViolation);
  CMatrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, ConstraintViolation);
  CHECK_FALSE(DensityMatrix::is_valid(neg));
}

TEST_CASE("tensor") {
  auto rng = qtest::rng_for(1);
  const DensityMatrix rho(qtest::random_state(3, rng));
  const DensityMatrix one(CMatrix::Ones(1, 1));
  std::vector<DensityMatrix> f{rho, one};
  CHECK(maxdiff(tensor(f).matrix(), rho.matrix()) == 0.0);
  std::vector<DensityMatrix> g{DensityMatrix(ket_bra(2, 0)), DensityMatrix(ket_bra(2, 1))};
  CHECK(maxdiff(tensor(g).matrix(), ket_bra(4, 1)) == 0.0);
  std::vector<DensityMatrix> h{rho, rho, rho};
  CHECK(std::abs(tensor(h).matrix().trace() - cplx(1.0)) < 1e-12);
  std::vector<DensityMatrix> big(5, rho);
  CHECK_THROWS_AS(tensor(big, 100), InvalidArgument);
}

TEST_CASE("partial trace") {
  auto rng = qtest::rng_for(2);
  for (int d : {2, 3}) {
    const CMatrix r1 = qtest::random_state(d, rng), r2 = qtest::random_state(d, rng), r3 = qtest::random_state(d, rng);
    const CMatrix prod = qtest::kron2(qtest::kron2(r1, r2), r3);
    CHECK(maxdiff(partial_trace(prod, {1}, d, 3), r1) < 1e-14);
    CHECK(maxdiff(partial_trace(prod, {2}, d, 3), r2) < 1e-14);
    CHECK(maxdiff(partial_trace(prod, {3}, d, 3), r3) < 1e-14);
    CHECK(maxdiff(partial_trace(prod, {1, 3}, d, 3), qtest::kron2(r1, r3)) < 1e-14);

    // linear and trace preserving on arbitrary matrices
    CMatrix a = CMatrix::Random(d * d * d, d * d * d), b = CMatrix::Random(d * d * d, d * d * d);
    const CMatrix pa = partial_trace(a, {2}, d, 3), pb = partial_trace(b, {2}, d, 3);
    CHECK(maxdiff(partial_trace(2.0 * a + b, {2}, d, 3), 2.0 * pa + pb) < 1e-12);
    CHECK(std::abs(pa.trace() - a.trace()) < 1e-12);
    CHECK(maxdiff(partial_trace(a, {1}, d, 3), qtest::trace_all_but_first(a, d)) < 1e-12);

    // single-permutation contractions
    const auto s3 = symmetric_group(3);
    auto contract = [&](int g) {
      return partial_trace(tensor_rep(s3.perm(g), d) * prod, {1}, d, 3);
    };
    CHECK(maxdiff(contract(0), r1) < 1e-13);
    CHECK(maxdiff(contract(3), r1 * (r2 * r3).trace()) < 1e-13);
    CHECK(maxdiff(contract(1), r2 * r3 * r1) < 1e-13);

    // conjugation by Q2 permutes the factors
    const CMatrix q2 = tensor_rep(s3.perm(1), d);
    CHECK(maxdiff(q2 * prod * q2.adjoint(), qtest::kron2(qtest::kron2(r2, r3), r1)) < 1e-15);
  }
  CHECK_THROWS_AS(partial_trace(CMatrix::Identity(8, 8), {4}, 2, 3), InvalidArgument);
  CHECK_THROWS_AS(partial_trace(CMatrix::Identity(8, 8), {1, 1}, 2, 3), InvalidArgument);
  CHECK_THROWS_AS(partial_trace(CMatrix::Identity(7, 7), {1}, 2, 3), InvalidArgument);
}

TEST_CASE("commutators") {
  auto rng = qtest::rng_for(3);
  const CMatrix a = qtest::random_state(3, rng), b = qtest::random_state(3, rng), c = qtest::random_state(3, rng);
  CHECK(commutator(a, a).cwiseAbs().maxCoeff() == 0.0);
  const CMatrix jac = double_commutator(a, b, c) + double_commutator(b, c, a) + double_commutator(c, a, b);
  CHECK(jac.cwiseAbs().maxCoeff() < 1e-15);
  // [1,[2,3]] = 123 - 132 - 231 + 321 over orderings (123, 132, 213, 231, 312, 321)
  const CMatrix expand = a * b * c - a * c * b - b * c * a + c * b * a;
  CHECK(maxdiff(double_commutator(a, b, c), expand) < 1e-15);
  CHECK_THROWS_AS(commutator(a, CMatrix::Identity(2, 2)), InvalidArgument);
}

TEST_CASE("random_density") {
  const DensityMatrix pure = random_density(3, 1, std::uint64_t{7});
  CHECK(std::abs((pure.matrix() * pure.matrix()).trace() - cplx(1.0)) < 1e-10);
  CHECK(maxdiff(random_density(3, 2, std::uint64_t{7}).matrix(), random_density(3, 2, std::uint64_t{7}).matrix()) == 0.0);
  std::mt19937_64 rng(8);
  std::array<double, 3> mean{};
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const auto v = bloch_vector(random_density(2, rng));
    for (int i = 0; i < 3; ++i) mean[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)] / n;
  }
  CHECK(std::sqrt(mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]) < 0.05);
  CHECK_THROWS_AS(random_density(2, 3, rng), InvalidArgument);
}

TEST_CASE("entropies") {
  const auto vn = von_neumann_entropy();
  CHECK(entropy(vn, ket_bra(2, 0)) == doctest::Approx(0.0));
  CHECK(entropy(vn, CMatrix::Identity(2, 2) / 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.75;
  m(1, 1) = 0.25;
  CHECK(entropy(vn, m) == doctest::Approx(-0.75 * std::log(0.75) - 0.25 * std::log(0.25)).epsilon(1e-14));
  CHECK(entropy(renyi_entropy(2.0), m) == doctest::Approx(-std::log(0.625)).epsilon(1e-14));
  CHECK(entropy(negated_purity(), m) == doctest::Approx(-0.625).epsilon(1e-14));
  CHECK_THROWS_AS(renyi_entropy(3.0), InvalidArgument);
  CHECK_THROWS_AS(renyi_entropy(1.0), InvalidArgument);
  CHECK_THROWS_AS(entropy_by_name("nope"), InvalidArgument);
  CHECK(entropy_by_name("renyi_0.5").name == "renyi_0.5");

  // symmetric and concave on random pairs
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (const auto& f : entropy_registry()) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const int d = 2 + k % 3;
      if (!f.concave_at(d)) continue;
      const CMatrix r = random_density(d, 1 + k % d, rng).matrix();
      const CMatrix s = random_density(d, rng).matrix();
      const double l = u(rng);
      worst = std::min(worst, entropy(f, l * r + (1 - l) * s) - l * entropy(f, r) - (1 - l) * entropy(f, s));
    }
    CHECK_MESSAGE(worst >= -1e-9, f.name);
    Eigen::VectorXd ev(3);
    ev << 0.5, 0.3, 0.2;
    Eigen::VectorXd perm(3);
    perm << 0.2, 0.5, 0.3;
    CHECK(f.evaluate(ev) == doctest::Approx(f.evaluate(perm)).epsilon(1e-15));
  }
}

TEST_CASE("Renyi-2 concavity fails beyond qubits") {
  const auto f = renyi_entropy(2.0);
  CHECK(f.concave_at(2));
  CHECK_FALSE(f.concave_at(3));
  CHECK(von_neumann_entropy().concave_at(64));
  Eigen::VectorXd p(3), q(3);
  p << 0.0076, 0.0035, 0.9889;
  q << 0.1300, 0.0972, 0.7728;
  const double l = 0.624;
  CMatrix r = p.cast<cplx>().asDiagonal(), s = q.cast<cplx>().asDiagonal();
  CHECK(entropy(f, l * r + (1 - l) * s) < l * entropy(f, r) + (1 - l) * entropy(f, s) - 1e-3);
}

TEST_CASE("Hermitian eigenvalues at 64 x 64") {
  std::mt19937_64 rng(12);
  const CMatrix u = qtest::random_unitary(64, rng);
  Eigen::VectorXd ev(64);
  for (int k = 0; k < 64; ++k) ev(k) = -1.0 + 2.0 * k / 63.0;
  const CMatrix h = u * ev.cast<cplx>().asDiagonal() * u.adjoint();
  CHECK((hermitian_eigenvalues(0.5 * (h + h.adjoint())) - ev).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("bloch encoding and JSON") {
  const CMatrix r = bloch_state(0.1, -0.2, 0.3);
  const auto v = bloch_vector(r);
  CHECK(v[0] == doctest::Approx(0.1));
  CHECK(v[1] == doctest::Approx(-0.2));
  CHECK(v[2] == doctest::Approx(0.3));
  const DensityMatrix back = density_from_json(json::parse(dump(to_json(r))));
  CHECK(maxdiff(back.matrix(), r) == 0.0);
  CHECK(maxdiff(density_from_json(json::parse(R"({"bloch": [0.1, -0.2, 0.3]})")).matrix(), r) == 0.0);
  CHECK_THROWS_AS(density_from_json(json::parse(R"([[1, 0], [0, 1]])")), ConstraintViolation);
}

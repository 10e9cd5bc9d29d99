// Test-side oracles, written from the definitions without touching the
// library code paths they check.
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qmix/common.hpp"

namespace qtest {

using qmix::CMatrix;
using qmix::cplx;

inline constexpr double kPi = std::numbers::pi;

inline std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Permutation operator from |i_1..i_n> -> |i_{pi^-1(1)}..i_{pi^-1(n)}>,
/// 1-based images, subsystem 1 most significant.
inline CMatrix perm_operator(const std::vector<int>& images, int d) {
  const int n = static_cast<int>(images.size());
  std::vector<int> inv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(images[static_cast<std::size_t>(i)] - 1)] = i;
  int dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  CMatrix m = CMatrix::Zero(dim, dim);
  std::vector<int> digits(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  for (int col = 0; col < dim; ++col) {
    int c = col;
    for (int k = n - 1; k >= 0; --k) {
      digits[static_cast<std::size_t>(k)] = c % d;
      c /= d;
    }
    // output slot j carries input slot pi^-1(j)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = digits[static_cast<std::size_t>(inv[static_cast<std::size_t>(j)])];
    int row = 0;
    for (int j = 0; j < n; ++j) row = row * d + out[static_cast<std::size_t>(j)];
    m(row, col) = 1.0;
  }
  return m;
}

/// Tr over every subsystem but the first of a d^n x d^n matrix.
inline CMatrix trace_all_but_first(const CMatrix& m, int d) {
  const auto rest = m.rows() / d;
  CMatrix out = CMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (Eigen::Index t = 0; t < rest; ++t) out(a, b) += m(a * rest + t, b * rest + t);
  return out;
}

inline CMatrix kron2(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Random Hermitian PSD unit-trace matrix, drawn independently of the library.
inline CMatrix random_state(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = cplx(re, im);
    }
  CMatrix r = g * g.adjoint();
  r /= r.trace().real();
  return 0.5 * (r + r.adjoint());
}

inline CMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(d, d);
}

inline double maxdiff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// S3 elements in the fixed order Q1..Q6 as 1-based image lists.
inline const std::vector<std::vector<int>>& s3_images() {
  static const std::vector<std::vector<int>> q = {{1, 2, 3}, {3, 1, 2}, {2, 3, 1}, {1, 3, 2}, {2, 1, 3}, {3, 2, 1}};
  return q;
}

/// Direct Tr_{2,3}[U (r1 x r2 x r3) U^dagger] with U = sum z_i Q_i.
inline CMatrix ternary_oracle(const CMatrix& r1, const CMatrix& r2, const CMatrix& r3, const std::array<cplx, 6>& z) {
  const int d = static_cast<int>(r1.rows());
  CMatrix u = CMatrix::Zero(d * d * d, d * d * d);
  for (std::size_t k = 0; k < 6; ++k) u += z[k] * perm_operator(s3_images()[k], d);
  return trace_all_but_first(u * kron2(kron2(r1, r2), r3) * u.adjoint(), d);
}

}  // namespace qtest

#include "qmix/repr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

namespace qmix {

namespace {

constexpr double kIrrepTol = 1e-12;

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

CMatrix scalar(cplx v) { return CMatrix::Constant(1, 1, v); }

}  // namespace

void validate_irrep(const FiniteGroup& group, const Irrep& irrep) {
  const int n = group.order();
  if (irrep.dim < 1) throw InvalidArgument("irrep '" + irrep.label + "': dimension must be positive");
  if (static_cast<int>(irrep.matrices.size()) != n)
    throw InvalidArgument("irrep '" + irrep.label + "': one matrix per group element required");
  for (const auto& m : irrep.matrices) {
    if (m.rows() != irrep.dim || m.cols() != irrep.dim)
      throw InvalidArgument("irrep '" + irrep.label + "': matrix has wrong shape");
    if (unitarity_residual(m) > kIrrepTol) throw InvalidArgument("irrep '" + irrep.label + "': matrix not unitary");
  }
  if (max_abs(irrep(group.identity()) - CMatrix::Identity(irrep.dim, irrep.dim)) > kIrrepTol)
    throw InvalidArgument("irrep '" + irrep.label + "': identity element must map to I");
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (max_abs(irrep(group.mul(g, h)) - irrep(g) * irrep(h)) > kIrrepTol)
        throw InvalidArgument("irrep '" + irrep.label + "': not a homomorphism");
}

IrrepSet::IrrepSet(FiniteGroup group, std::vector<Irrep> irreps)
    : group_(std::move(group)), irreps_(std::move(irreps)) {
  const int n = group_.order();
  int dim_sq = 0;
  for (const auto& t : irreps_) {
    validate_irrep(group_, t);
    dim_sq += t.dim * t.dim;
  }
  if (dim_sq != n) throw InvalidArgument("IrrepSet: sum of squared dimensions must equal the group order");
  // <chi_a, chi_b> = (1/|G|) sum_g conj(chi_a(g)) chi_b(g) = delta_ab
  for (std::size_t a = 0; a < irreps_.size(); ++a)
    for (std::size_t b = a; b < irreps_.size(); ++b) {
      cplx ip = 0.0;
      for (int g = 0; g < n; ++g) ip += std::conj(irreps_[a].character(g)) * irreps_[b].character(g);
      ip /= static_cast<double>(n);
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(ip - expected) > 1e-10)
        throw InvalidArgument("IrrepSet: characters of '" + irreps_[a].label + "' and '" + irreps_[b].label +
                              "' are not orthonormal");
    }
}

IrrepSet irreps_s3() {
  const double h = std::sqrt(3.0) / 2.0;
  Irrep trivial{"trivial", 1, {}};
  Irrep sign{"sign", 1, {}};
  for (int k = 0; k < 6; ++k) {
    trivial.matrices.push_back(scalar(1.0));
    sign.matrices.push_back(scalar(k < 3 ? 1.0 : -1.0));
  }
  Irrep standard{"standard",
                 2,
                 {mat2(1, 0, 0, 1), mat2(-0.5, -h, h, -0.5), mat2(-0.5, h, -h, -0.5), mat2(1, 0, 0, -1),
                  mat2(-0.5, -h, -h, 0.5), mat2(-0.5, h, h, 0.5)}};
  return IrrepSet(symmetric_group(3), {trivial, sign, standard});
}

Irrep irrep_s3_tau3_prime() {
  const cplx w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const cplx w2 = w * w;
  Irrep t{"standard_prime",
          2,
          {mat2(1, 0, 0, 1), mat2(w, 0, 0, w2), mat2(w2, 0, 0, w), mat2(0, 1, 1, 0), mat2(0, w2, w, 0),
           mat2(0, w, w2, 0)}};
  validate_irrep(symmetric_group(3), t);
  return t;
}

IrrepSet irreps_cyclic(int n) {
  FiniteGroup g = cyclic_group(n);
  std::vector<Irrep> out;
  for (int k = 0; k < n; ++k) {
    Irrep t{"chi" + std::to_string(k), 1, {}};
    for (int x = 0; x < n; ++x)
      t.matrices.push_back(scalar(std::polar(1.0, 2.0 * std::numbers::pi * k * x / n)));
    out.push_back(std::move(t));
  }
  return IrrepSet(std::move(g), std::move(out));
}

CMatrix fourier_matrix(const IrrepSet& irreps) {
  const int n = irreps.group().order();
  CMatrix f = CMatrix::Zero(n, n);
  int row = 0;
  for (const auto& t : irreps.irreps()) {
    const double scale = std::sqrt(static_cast<double>(t.dim) / n);
    for (int j = 0; j < t.dim; ++j)
      for (int k = 0; k < t.dim; ++k, ++row)
        for (int g = 0; g < n; ++g) f(row, g) = scale * t(g)(j, k);
  }
  if (row != n) throw InvalidArgument("fourier_matrix: irrep dimensions do not match the group order");
  return f;
}

std::vector<CMatrix> block_decompose(const CMatrix& m, const IrrepSet& irreps, double tol) {
  const int n = irreps.group().order();
  if (m.rows() != n || m.cols() != n) throw InvalidArgument("block_decompose: matrix must be |G| x |G|");
  const CMatrix f = fourier_matrix(irreps);
  const CMatrix hat = f * m * f.adjoint();

  CMatrix rebuilt = CMatrix::Zero(n, n);
  std::vector<CMatrix> blocks;
  int off = 0;
  for (const auto& t : irreps.irreps()) {
    const int d = t.dim;
    CMatrix b = CMatrix::Zero(d, d);
    // Row (j, k) sits at off + j*d + k; the block equals B (x) I_d.
    for (int j = 0; j < d; ++j)
      for (int jp = 0; jp < d; ++jp) {
        cplx s = 0.0;
        for (int k = 0; k < d; ++k) s += hat(off + j * d + k, off + jp * d + k);
        b(j, jp) = s / static_cast<double>(d);
      }
    for (int j = 0; j < d; ++j)
      for (int jp = 0; jp < d; ++jp)
        for (int k = 0; k < d; ++k) rebuilt(off + j * d + k, off + jp * d + k) = b(j, jp);
    blocks.push_back(std::move(b));
    off += d * d;
  }
  const double residual = max_abs(hat - rebuilt);
  if (residual > tol)
    throw NotBlockDiagonal("block_decompose: off-block residual " + std::to_string(residual) + " exceeds tolerance");
  return blocks;
}

CoeffVector synthesize_coeffs(const BlockUnitaries& blocks, const IrrepSet& irreps, double tol) {
  const int n = irreps.group().order();
  if (blocks.blocks.size() != irreps.size()) throw InvalidArgument("synthesize_coeffs: one block per irrep required");
  for (std::size_t k = 0; k < irreps.size(); ++k) {
    const auto& b = blocks.blocks[k];
    if (b.rows() != irreps[k].dim || b.cols() != irreps[k].dim)
      throw InvalidArgument("synthesize_coeffs: block for '" + irreps[k].label + "' has wrong shape");
    const double r = unitarity_residual(b);
    if (r > tol) throw NonUnitaryBlock(k, irreps[k].label, r);
  }
  CVector z = CVector::Zero(n);
  for (int g = 0; g < n; ++g)
    for (std::size_t k = 0; k < irreps.size(); ++k) {
      const auto& t = irreps[k];
      z(g) += static_cast<double>(t.dim) / n * (t(g).adjoint() * blocks.blocks[k]).trace();
    }
  return CoeffVector(irreps.group(), std::move(z));
}

BlockUnitaries fourier_blocks(const CoeffVector& z, const IrrepSet& irreps) {
  if (!(z.group == irreps.group())) throw InvalidArgument("fourier_blocks: coefficient vector belongs to another group");
  BlockUnitaries out;
  for (const auto& t : irreps.irreps()) {
    CMatrix b = CMatrix::Zero(t.dim, t.dim);
    for (int g = 0; g < z.group.order(); ++g) b += z[g] * t(g);
    out.blocks.push_back(std::move(b));
  }
  return out;
}

BlockUnitaries extract_blocks(const CoeffVector& z, const IrrepSet& irreps, double tol) {
  BlockUnitaries out = fourier_blocks(z, irreps);
  for (std::size_t k = 0; k < out.blocks.size(); ++k) {
    const double r = unitarity_residual(out.blocks[k]);
    if (r > tol) throw NonUnitaryBlock(k, irreps[k].label, r);
  }
  return out;
}

CMatrix tensor_rep(const Perm& p, int d, std::int64_t max_dim) {
  const int n = p.size();
  if (d < 1) throw InvalidArgument("tensor_rep: local dimension must be positive");
  std::int64_t dim = 1;
  for (int i = 0; i < n; ++i) {
    dim *= d;
    if (dim > max_dim) throw InvalidArgument("tensor_rep: d^n exceeds the size cap");
  }
  const Perm pinv = perm_inverse(p);
  CMatrix q = CMatrix::Zero(dim, dim);
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (std::int64_t col = 0; col < dim; ++col) {
    // Most significant digit is subsystem 1.
    std::int64_t rest = col;
    for (int i = n - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % d);
      rest /= d;
    }
    std::int64_t row = 0;
    for (int i = 1; i <= n; ++i) row = row * d + digits[static_cast<std::size_t>(pinv(i) - 1)];
    q(row, col) = 1.0;
  }
  return q;
}

CMatrix tensor_lincomb(const CoeffVector& z, int d, std::int64_t max_dim) {
  const FiniteGroup& g = z.group;
  CMatrix out;
  for (int k = 0; k < g.order(); ++k) {
    CMatrix q = tensor_rep(g.perm(k), d, max_dim);
    if (k == 0)
      out = z[k] * q;
    else
      out += z[k] * q;
  }
  return out;
}

CMatrix haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= a > 0 ? rjj / a : cplx(1.0);
  }
  return q;
}

BlockUnitaries random_blocks(const IrrepSet& irreps, std::mt19937_64& rng) {
  BlockUnitaries out;
  for (const auto& t : irreps.irreps()) out.blocks.push_back(haar_unitary(t.dim, rng));
  return out;
}

// ---------------------------------------------------------------------------
// Flat unitary search

namespace {

using Params = std::array<double, 6>;

CVector flat_z(const Params& x, const IrrepSet& s3) {
  const double norm = std::sqrt(x[2] * x[2] + x[3] * x[3] + x[4] * x[4] + x[5] * x[5]);
  const cplx a(x[2] / norm, x[3] / norm);
  const cplx c(x[4] / norm, x[5] / norm);
  BlockUnitaries b{{scalar(std::polar(1.0, x[0])), scalar(std::polar(1.0, x[1])), mat2(a, c, -std::conj(c), std::conj(a))}};
  return synthesize_coeffs(b, s3, 1e-8).coeffs;
}

double flatness(const CVector& z) {
  double r = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    const double e = std::norm(z(i)) - 1.0 / 6.0;
    r += e * e;
  }
  return r;
}

Params nelder_mead(const std::function<double(const Params&)>& f, Params x0, double step, int max_iter) {
  constexpr int n = 6;
  std::array<Params, n + 1> simplex;
  std::array<double, n + 1> val;
  simplex[0] = x0;
  for (int i = 0; i < n; ++i) {
    simplex[i + 1] = x0;
    simplex[i + 1][i] += step;
  }
  for (int i = 0; i <= n; ++i) val[i] = f(simplex[i]);

  for (int it = 0; it < max_iter; ++it) {
    std::array<int, n + 1> idx;
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] < val[b]; });
    const int best = idx[0], worst = idx[n], second = idx[n - 1];
    if (val[best] < 1e-30) break;

    Params centroid{};
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) centroid[k] += simplex[idx[i]][k] / n;
    auto along = [&](double t) {
      Params p;
      for (int k = 0; k < n; ++k) p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
      return p;
    };
    const Params xr = along(-1.0);
    const double fr = f(xr);
    if (fr < val[best]) {
      const Params xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        val[worst] = fe;
      } else {
        simplex[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      simplex[worst] = xr;
      val[worst] = fr;
    } else {
      const Params xc = fr < val[worst] ? along(-0.5) : along(0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, val[worst])) {
        simplex[worst] = xc;
        val[worst] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          auto& p = simplex[idx[i]];
          for (int k = 0; k < n; ++k) p[k] = simplex[best][k] + 0.5 * (p[k] - simplex[best][k]);
          val[idx[i]] = f(p);
        }
      }
    }
  }
  return simplex[static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin())];
}

// Damped Gauss-Newton on the residual vector (|z_g|^2 - 1/6)_g.
Params polish(const IrrepSet& s3, Params x) {
  auto residuals = [&](const Params& p) {
    const CVector z = flat_z(p, s3);
    Eigen::VectorXd r(z.size());
    for (int i = 0; i < z.size(); ++i) r(i) = std::norm(z(i)) - 1.0 / 6.0;
    return r;
  };
  double lambda = 1e-6;
  Eigen::VectorXd r = residuals(x);
  for (int it = 0; it < 50 && r.squaredNorm() > 1e-32; ++it) {
    Eigen::MatrixXd jac(r.size(), 6);
    for (int k = 0; k < 6; ++k) {
      Params xp = x;
      const double h = 1e-7;
      xp[k] += h;
      jac.col(k) = (residuals(xp) - r) / h;
    }
    const Eigen::MatrixXd a = jac.transpose() * jac + lambda * Eigen::MatrixXd::Identity(6, 6);
    const Eigen::VectorXd dx = a.ldlt().solve(-jac.transpose() * r);
    Params xn = x;
    for (int k = 0; k < 6; ++k) xn[k] += dx(k);
    const Eigen::VectorXd rn = residuals(xn);
    if (rn.squaredNorm() < r.squaredNorm()) {
      x = xn;
      r = rn;
      lambda = std::max(lambda * 0.1, 1e-12);
    } else {
      lambda *= 10.0;
    }
  }
  return x;
}

}  // namespace

std::vector<CoeffVector> flat_unitary_search(const IrrepSet& s3, const FlatSearchOptions& opts) {
  if (s3.group().order() != 6 || s3.size() != 3)
    throw InvalidArgument("flat_unitary_search: expects the irreps of S_3");
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double target = 1.0 / std::sqrt(6.0);

  auto objective = [&](const Params& p) { return flatness(flat_z(p, s3)); };
  std::vector<CVector> found;
  for (int attempt = 0; attempt < opts.attempts; ++attempt) {
    Params x0;
    x0[0] = angle(rng);
    x0[1] = angle(rng);
    for (int k = 2; k < 6; ++k) x0[k] = normal(rng);
    Params x = nelder_mead(objective, x0, 0.3, 600);
    if (objective(x) > 1e-6) continue;
    x = polish(s3, x);
    const CVector z = flat_z(x, s3);
    double dev = 0.0;
    for (int i = 0; i < z.size(); ++i) dev = std::max(dev, std::abs(std::abs(z(i)) - target));
    if (dev > opts.flat_tol) continue;
    bool dup = false;
    for (const auto& f : found)
      if ((f - z).cwiseAbs().maxCoeff() < 1e-6) {
        dup = true;
        break;
      }
    if (!dup) found.push_back(z);
  }

  auto key = [](const CVector& z) {
    std::vector<double> k;
    for (int i = 0; i < z.size(); ++i) {
      k.push_back(std::round(z(i).real() * 1e6));
      k.push_back(std::round(z(i).imag() * 1e6));
    }
    return k;
  };
  std::sort(found.begin(), found.end(), [&](const CVector& a, const CVector& b) { return key(a) < key(b); });

  std::vector<CoeffVector> out;
  for (auto& z : found) {
    CoeffVector cv(s3.group(), z);
    extract_blocks(cv, s3);
    out.push_back(std::move(cv));
  }
  return out;
}

}  // namespace qmix

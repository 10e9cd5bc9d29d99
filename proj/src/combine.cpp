#include "qmix/combine.hpp"

#include <cmath>
#include <numbers>

namespace qmix {

namespace {

constexpr double kPi = std::numbers::pi;

int sign_from_bit(int bit) { return bit == 0 ? +1 : -1; }

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
}

void check_same_dim(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("states have different dimensions");
}

CMatrix combine2_expr(const CMatrix& r1, const CMatrix& r2, double lambda, int sign) {
  return lambda * r1 + (1.0 - lambda) * r2 + (sign * std::sqrt(lambda * (1.0 - lambda))) * kI * commutator(r2, r1);
}

void check_distribution(const std::array<double, 3>& p, double tol) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= -tol)) throw ConstraintViolation("weights must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) throw ConstraintViolation("weights must sum to 1");
}

const S3Coeffs& check_s3_unitary(const S3Coeffs& z) {
  if (!z.is_unitary()) throw NonUnitaryCoefficients("coefficients do not give a unitary combination of permutations");
  return z;
}

}  // namespace

double wrap_angle(double x) {
  double r = std::remainder(x, 2.0 * kPi);  // in [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

// --- QTriple ----------------------------------------------------------------

QTriple::QTriple(std::array<cplx, 3> q) : q_(q) {
  const double norm = std::norm(q[0]) + std::norm(q[1]) + std::norm(q[2]);
  const cplx sum = q[0] + q[1] + q[2];
  if (std::abs(norm - 1.0) > kParamTol) throw ConstraintViolation("QTriple: sum of |q_k|^2 must be 1");
  if (std::abs(sum - cplx(1.0)) > kParamTol) throw ConstraintViolation("QTriple: q1 + q2 + q3 must equal 1");
}

QTriple QTriple::from_any_gauge(std::array<cplx, 3> q) {
  const cplx sum = q[0] + q[1] + q[2];
  const double mag = std::abs(sum);
  if (std::abs(mag - 1.0) > kParamTol) throw ConstraintViolation("QTriple: |q1 + q2 + q3| must be 1");
  const cplx rot = std::conj(sum) / mag;
  for (auto& v : q) v *= rot;
  return QTriple(q);
}

std::array<double, 3> QTriple::weights() const noexcept {
  return {std::norm(q_[0]), std::norm(q_[1]), std::norm(q_[2])};
}

QTriple QTriple::conjugate() const { return QTriple({std::conj(q_[0]), std::conj(q_[1]), std::conj(q_[2])}); }

// --- PDelta -------------------------------------------------------------------

void PDelta::validate(double tol) const {
  check_distribution(p, tol);
  const double s = delta[0] + delta[1] + delta[2];
  if (std::abs(wrap_angle(s)) > tol) throw ConstraintViolation("PDelta: angles must sum to 0 mod 2 pi");
  const double c = std::sqrt(p[0] * p[1]) * std::cos(delta[0]) + std::sqrt(p[1] * p[2]) * std::cos(delta[1]) +
                   std::sqrt(p[2] * p[0]) * std::cos(delta[2]);
  if (std::abs(c) > tol) throw ConstraintViolation("PDelta: weighted cosine sum must vanish");
}

// --- S3Coeffs -----------------------------------------------------------------

CoeffVector S3Coeffs::to_coeff_vector() const {
  CVector v(6);
  for (int i = 0; i < 6; ++i) v(i) = z[static_cast<std::size_t>(i)];
  return CoeffVector(symmetric_group(3), std::move(v));
}

S3Coeffs S3Coeffs::from_coeff_vector(const CoeffVector& v) {
  if (v.group.order() != 6 || !v.group.has_perms() || !(v.group == symmetric_group(3)))
    throw InvalidArgument("S3Coeffs: coefficient vector must live on symmetric_group(3)");
  S3Coeffs out;
  for (int i = 0; i < 6; ++i) out.z[static_cast<std::size_t>(i)] = v[i];
  return out;
}

bool S3Coeffs::is_unitary(double tol) const {
  static const IrrepSet s3 = irreps_s3();
  const BlockUnitaries b = fourier_blocks(to_coeff_vector(), s3);
  for (const auto& m : b.blocks)
    if (unitarity_residual(m) > tol) return false;
  return true;
}

double S3Coeffs::independence_residual() const {
  double r = 0.0;
  for (std::size_t k = 0; k < 3; ++k) r = std::max(r, std::abs((z[k] * std::conj(z[k + 3])).real()));
  return r;
}

void NestedSpec::validate() const {
  if (ordering < 1 || ordering > 3) throw InvalidArgument("NestedSpec: ordering must be 1, 2 or 3");
  if (!(a >= 0.0 && a <= 1.0) || !(a_prime >= 0.0 && a_prime <= 1.0))
    throw InvalidArgument("NestedSpec: weights must lie in [0, 1]");
  if ((s != 0 && s != 1) || (s_prime != 0 && s_prime != 1))
    throw InvalidArgument("NestedSpec: sign bits must be 0 or 1");
}

// --- binary -------------------------------------------------------------------

CMatrix partial_swap_unitary(double lambda, int d, int sign) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("partial_swap_unitary: lambda must lie in [0, 1]");
  check_sign(sign);
  const CMatrix swap = tensor_rep(Perm({2, 1}), d);
  return std::sqrt(lambda) * CMatrix::Identity(swap.rows(), swap.cols()) +
         (sign * std::sqrt(1.0 - lambda)) * kI * swap;
}

DensityMatrix combine2(const DensityMatrix& rho1, const DensityMatrix& rho2, double lambda, int sign) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("combine2: lambda must lie in [0, 1]");
  check_sign(sign);
  check_same_dim(rho1, rho2);
  return DensityMatrix(combine2_expr(rho1, rho2, lambda, sign));
}

DensityMatrix combine2_bruteforce(const DensityMatrix& rho1, const DensityMatrix& rho2, double lambda, int sign) {
  check_same_dim(rho1, rho2);
  const int d = rho1.dim();
  const CMatrix u = partial_swap_unitary(lambda, d, sign);
  return DensityMatrix(partial_trace(u * kron(rho1, rho2) * u.adjoint(), {1}, d, 2));
}

SwapCombination decompose_swap_combination(cplx z1, cplx z2, double tol) {
  if (std::abs(std::norm(z1) + std::norm(z2) - 1.0) > tol || std::abs((z1 * std::conj(z2)).real()) > tol)
    throw NonUnitaryCoefficients("z1 I + z2 S is not unitary");
  SwapCombination out;
  out.lambda = std::clamp(std::norm(z1), 0.0, 1.0);
  if (std::abs(z1) > 1e-8) {
    out.phi = std::arg(z1);
    const cplx rel = z2 / (kI * std::polar(1.0, out.phi));
    out.sign = (rel.real() >= 0.0) ? +1 : -1;
  } else {
    out.sign = +1;
    out.phi = std::arg(z2 / kI);
  }
  return out;
}

// --- ternary ------------------------------------------------------------------

DensityMatrix combine3_bruteforce(const DensityMatrix& rho1, const DensityMatrix& rho2, const DensityMatrix& rho3,
                                  const S3Coeffs& z) {
  check_same_dim(rho1, rho2);
  check_same_dim(rho1, rho3);
  const int d = rho1.dim();
  if (d > 8) throw InvalidArgument("combine3_bruteforce: local dimension must be at most 8");
  check_s3_unitary(z);
  const CMatrix u = tensor_lincomb(z.to_coeff_vector(), d);
  const CMatrix prod = kron(kron(rho1, rho2), rho3);
  return DensityMatrix(partial_trace(u * prod * u.adjoint(), {1}, d, 3));
}

CMatrix combine3_magic(const CMatrix& r1, const CMatrix& r2, const CMatrix& r3, const S3Coeffs& zc) {
  check_same_dim(r1, r2);
  check_same_dim(r1, r3);
  const auto& z = zc.z;
  auto cj = [](cplx v) { return std::conj(v); };
  auto with_ct = [](const CMatrix& m) -> CMatrix { return m + m.adjoint(); };
  const cplx t23 = (r2 * r3).trace();
  const cplx t31 = (r3 * r1).trace();
  const cplx t12 = (r1 * r2).trace();

  CMatrix out = (std::norm(z[0]) + std::norm(z[3]) + 2.0 * (z[0] * cj(z[3])).real() * t23) * r1 +
                (std::norm(z[1]) + std::norm(z[4]) + 2.0 * (z[1] * cj(z[4])).real() * t31) * r2 +
                (std::norm(z[2]) + std::norm(z[5]) + 2.0 * (z[2] * cj(z[5])).real() * t12) * r3;

  out += with_ct((z[0] * cj(z[4]) + z[3] * cj(z[1])) * r1 * r2);
  out += with_ct((z[1] * cj(z[5]) + z[4] * cj(z[2])) * r2 * r3);
  out += with_ct((z[2] * cj(z[3]) + z[5] * cj(z[0])) * r3 * r1);

  out += with_ct((z[1] * cj(z[0]) + z[4] * cj(z[3])) * r2 * r3 * r1);
  out += with_ct((z[2] * cj(z[1]) + z[5] * cj(z[4])) * r3 * r1 * r2);
  out += with_ct((z[0] * cj(z[2]) + z[3] * cj(z[5])) * r1 * r2 * r3);
  return out;
}

DensityMatrix combine3_closed(const DensityMatrix& rho1, const DensityMatrix& rho2, const DensityMatrix& rho3,
                              const QTriple& qt) {
  check_same_dim(rho1, rho2);
  check_same_dim(rho1, rho3);
  const CMatrix& r1 = rho1;
  const CMatrix& r2 = rho2;
  const CMatrix& r3 = rho3;
  const auto& q = qt.values();
  const cplx q12 = q[0] * std::conj(q[1]);
  const cplx q23 = q[1] * std::conj(q[2]);
  const cplx q31 = q[2] * std::conj(q[0]);

  CMatrix out = std::norm(q[0]) * r1 + std::norm(q[1]) * r2 + std::norm(q[2]) * r3;
  out += q12.imag() * kI * commutator(r1, r2);
  out += q23.imag() * kI * commutator(r2, r3);
  out += q31.imag() * kI * commutator(r3, r1);
  out += q12.real() * (r2 * r3 * r1 + r1 * r3 * r2);
  out += q23.real() * (r3 * r1 * r2 + r2 * r1 * r3);
  out += q31.real() * (r1 * r2 * r3 + r3 * r2 * r1);
  return DensityMatrix(std::move(out));
}

DensityMatrix combine3_closed(const DensityMatrix& rho1, const DensityMatrix& rho2, const DensityMatrix& rho3,
                              const PDelta& pd) {
  pd.validate();
  check_same_dim(rho1, rho2);
  check_same_dim(rho1, rho3);
  const CMatrix& r1 = rho1;
  const CMatrix& r2 = rho2;
  const CMatrix& r3 = rho3;
  const auto& p = pd.p;
  const auto& dl = pd.delta;
  const double w12 = std::sqrt(p[0] * p[1]);
  const double w23 = std::sqrt(p[1] * p[2]);
  const double w31 = std::sqrt(p[2] * p[0]);

  CMatrix out = p[0] * r1 + p[1] * r2 + p[2] * r3;
  out += (w12 * std::sin(dl[0])) * kI * commutator(r1, r2);
  out += (w23 * std::sin(dl[1])) * kI * commutator(r2, r3);
  out += (w31 * std::sin(dl[2])) * kI * commutator(r3, r1);
  out += (w12 * std::cos(dl[0])) * (r2 * r3 * r1 + r1 * r3 * r2);
  out += (w23 * std::cos(dl[1])) * (r3 * r1 * r2 + r2 * r1 * r3);
  out += (w31 * std::cos(dl[2])) * (r1 * r2 * r3 + r3 * r2 * r1);
  return DensityMatrix(std::move(out));
}

// --- parametrizations ---------------------------------------------------------

S3Coeffs s3_coeffs_from_phases(double phi1, double phi2, cplx a, cplx c) {
  if (std::abs(std::norm(a) + std::norm(c) - 1.0) > kParamTol)
    throw ConstraintViolation("s3_coeffs_from_phases: |a|^2 + |c|^2 must be 1");
  const cplx e1 = std::polar(1.0, phi1);
  const cplx e2 = std::polar(1.0, phi2);
  const double r3 = std::sqrt(3.0);
  const cplx plus = a + r3 * c;
  const cplx minus = a - r3 * c;
  S3Coeffs out;
  out.z[0] = (e1 + e2 + 4.0 * a.real()) / 6.0;
  out.z[1] = (e1 + e2 - 2.0 * plus.real()) / 6.0;
  out.z[2] = (e1 + e2 - 2.0 * minus.real()) / 6.0;
  out.z[3] = (e1 - e2 + 4.0 * kI * a.imag()) / 6.0;
  out.z[4] = (e1 - e2 - 2.0 * kI * plus.imag()) / 6.0;
  out.z[5] = (e1 - e2 - 2.0 * kI * minus.imag()) / 6.0;
  return out;
}

QTriple q_from_z(const S3Coeffs& zc) {
  const auto& z = zc.z;
  for (std::size_t k = 0; k < 3; ++k) {
    if (std::abs(z[k].imag()) > kParamTol) throw GaugeViolation("q_from_z: z1, z2, z3 must be real");
    if (std::abs(z[k + 3].real()) > kParamTol) throw GaugeViolation("q_from_z: z4, z5, z6 must be imaginary");
  }
  return QTriple::from_any_gauge({z[0] + z[3], z[1] + z[4], z[2] + z[5]});
}

S3Coeffs z_from_q(const QTriple& qt) {
  const auto& q = qt.values();
  S3Coeffs out;
  for (std::size_t k = 0; k < 3; ++k) {
    out.z[k] = q[k].real();
    out.z[k + 3] = kI * q[k].imag();
  }
  return out;
}

PDelta pdelta_from_q(const QTriple& qt) {
  const auto& q = qt.values();
  PDelta out;
  out.p = qt.weights();
  for (std::size_t k = 0; k < 3; ++k)
    if (std::abs(q[k]) < 1e-12)
      throw DegenerateWeight("pdelta_from_q: weight p" + std::to_string(k + 1) + " vanishes; its phase is undefined",
                             out.p);
  for (std::size_t k = 0; k < 3; ++k) out.delta[k] = wrap_angle(std::arg(q[k]) - std::arg(q[(k + 1) % 3]));
  return out;
}

QTriple q_from_pdelta(const PDelta& pd) {
  pd.validate();
  const double phi1 = 0.0;
  const double phi2 = phi1 - pd.delta[0];
  const double phi3 = phi2 - pd.delta[1];
  return QTriple::from_any_gauge({std::polar(std::sqrt(std::max(pd.p[0], 0.0)), phi1),
                                  std::polar(std::sqrt(std::max(pd.p[1], 0.0)), phi2),
                                  std::polar(std::sqrt(std::max(pd.p[2], 0.0)), phi3)});
}

QTriple sample_q(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double phi = angle(rng);
  std::array<double, 4> v{};
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  const cplx a(v[0] / norm, v[1] / norm);
  const cplx c(v[2] / norm, v[3] / norm);
  const cplx e = std::polar(1.0, phi);
  const double r3 = std::sqrt(3.0);
  return QTriple::from_any_gauge({(e + 2.0 * a) / 3.0, (e - a - r3 * c) / 3.0, (e - a + r3 * c) / 3.0});
}

bool verify_real_imag_param(const std::array<double, 3>& a, const std::array<double, 3>& b, double tol) {
  const double one = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
  const double zero = a[0] * a[1] + a[1] * a[2] + a[2] * a[0] + b[0] * b[1] + b[1] * b[2] + b[2] * b[0];
  return std::abs(one - 1.0) <= tol && std::abs(zero) <= tol;
}

// --- structure ----------------------------------------------------------------

double covariance_check(const std::function<CMatrix(std::span<const CMatrix>)>& op, const CMatrix& v,
                        std::span<const CMatrix> inputs) {
  std::vector<CMatrix> rotated;
  rotated.reserve(inputs.size());
  for (const auto& r : inputs) rotated.push_back(v * r * v.adjoint());
  const CMatrix lhs = op(rotated);
  const CMatrix rhs = v * op(inputs) * v.adjoint();
  return max_abs(lhs - rhs);
}

std::pair<double, double> third_order_reduce(const std::array<cplx, 3>& q) {
  const double x = (q[0] * std::conj(q[1])).real();
  const double y = (q[1] * std::conj(q[2])).real();
  const double z = (q[2] * std::conj(q[0])).real();
  if (std::abs(x + y + z) > kParamTol)
    throw CoefficientSumNonzero("third_order_reduce: third-order coefficients do not sum to zero");
  return {x, y};
}

std::pair<double, double> third_order_reduce(const QTriple& q) { return third_order_reduce(q.values()); }

DensityMatrix nested_expand(const NestedSpec& spec, const DensityMatrix& rho1, const DensityMatrix& rho2,
                            const DensityMatrix& rho3) {
  spec.validate();
  check_same_dim(rho1, rho2);
  check_same_dim(rho1, rho3);
  const std::array<const CMatrix*, 3> r = {&rho1.matrix(), &rho2.matrix(), &rho3.matrix()};
  const auto i = static_cast<std::size_t>(spec.ordering - 1);
  const CMatrix inner =
      combine2_expr(*r[(i + 1) % 3], *r[(i + 2) % 3], spec.a_prime, sign_from_bit(spec.s_prime));
  return DensityMatrix(combine2_expr(*r[i], inner, spec.a, sign_from_bit(spec.s)));
}

std::pair<double, double> nested_params_for_weights(const std::array<double, 3>& p, int ordering) {
  if (ordering < 1 || ordering > 3) throw InvalidArgument("ordering must be 1, 2 or 3");
  check_distribution(p, kParamTol);
  const auto i = static_cast<std::size_t>(ordering - 1);
  const double a = p[i];
  const double rest = p[(i + 1) % 3] + p[(i + 2) % 3];
  if (rest <= 1e-15) throw DegenerateOuterWeight("outer weight is 1; inner weight is undefined");
  return {a, std::clamp(p[(i + 1) % 3] / rest, 0.0, 1.0)};
}

std::array<double, 3> nested_weights(const NestedSpec& spec) {
  spec.validate();
  const auto i = static_cast<std::size_t>(spec.ordering - 1);
  std::array<double, 3> p{};
  p[i] = spec.a;
  p[(i + 1) % 3] = (1.0 - spec.a) * spec.a_prime;
  p[(i + 2) % 3] = (1.0 - spec.a) * (1.0 - spec.a_prime);
  return p;
}

PDelta delta_from_nested(const NestedSpec& spec) {
  PDelta pd;
  pd.p = nested_weights(spec);
  for (double v : pd.p)
    if (v <= 0.0) throw DegenerateWeight("delta_from_nested: all weights must be nonzero", pd.p);

  // Outer state i, inner pair (j, k). Angle delta_{m,m+1} is stored at index m.
  const auto i = static_cast<std::size_t>(spec.ordering - 1);
  const auto j = (i + 1) % 3;
  const auto k = (i + 2) % 3;
  const double ss = spec.s == 0 ? 1.0 : -1.0;
  const double ssp = spec.s_prime == 0 ? 1.0 : -1.0;
  const double pj = pd.p[j] / (pd.p[j] + pd.p[k]);
  const double pk = pd.p[k] / (pd.p[j] + pd.p[k]);

  pd.delta[j] = -ssp * kPi / 2.0;
  pd.delta[k] = std::atan2(ss * std::sqrt(pk), -ss * ssp * std::sqrt(pj));
  pd.delta[i] = std::atan2(-ss * std::sqrt(pj), ss * ssp * std::sqrt(pk));
  return pd;
}

NestedSpec nested_from_delta(const PDelta& pd, double tol) {
  pd.validate();
  for (double v : pd.p)
    if (v <= 0.0) throw DegenerateWeight("nested_from_delta: all weights must be nonzero", pd.p);
  for (std::size_t m = 0; m < 3; ++m) {
    if (std::abs(std::cos(pd.delta[m])) >= tol) continue;
    // cos(delta_{jk}) = 0 singles out outer state i = j - 1.
    const std::size_t j = m;
    const std::size_t i = (j + 2) % 3;
    const std::size_t k = (j + 1) % 3;
    NestedSpec spec;
    spec.ordering = static_cast<int>(i) + 1;
    spec.a = pd.p[i];
    spec.a_prime = pd.p[j] / (pd.p[j] + pd.p[k]);
    spec.s_prime = std::sin(pd.delta[j]) < 0.0 ? 0 : 1;
    spec.s = std::sin(pd.delta[k]) > 0.0 ? 0 : 1;
    return spec;
  }
  throw NotNested("no cos(delta_ij) vanishes; the point is not a nested combination");
}

}  // namespace qmix

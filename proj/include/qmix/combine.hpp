// Binary and ternary combination of qudit states.
//
// The ternary map is rho = Tr_{2,3}[U (rho1 (x) rho2 (x) rho3) U^dagger] with
// U = sum_i z_i Q_i over the six permutations of three qudits (ordered as in
// symmetric_group(3)). Three evaluators are provided and are expected to agree:
//
//   combine3_bruteforce  builds U on (C^d)^{(x)3} and traces out explicitly,
//   combine3_magic       the 36-term expansion in z,
//   combine3_closed      the nine-term form in the q (or p/delta) parameters.
#pragma once

#include <array>
#include <functional>
#include <random>
#include <span>
#include <utility>

#include "qmix/common.hpp"
#include "qmix/groups.hpp"
#include "qmix/quantum.hpp"
#include "qmix/repr.hpp"

namespace qmix {

inline constexpr double kParamTol = 1e-10;

/// (q1, q2, q3) with |q1|^2 + |q2|^2 + |q3|^2 = 1 and q1 + q2 + q3 = 1.
class QTriple {
 public:
  /// Throws ConstraintViolation unless both constraints hold within kParamTol.
  explicit QTriple(std::array<cplx, 3> q);
  /// Accepts any global phase (|q1 + q2 + q3| = 1) and rotates into the
  /// q1 + q2 + q3 = 1 gauge.
  static QTriple from_any_gauge(std::array<cplx, 3> q);

  const std::array<cplx, 3>& values() const noexcept { return q_; }
  cplx operator[](std::size_t k) const { return q_.at(k); }
  std::array<double, 3> weights() const noexcept;
  QTriple conjugate() const;

 private:
  std::array<cplx, 3> q_;
};

/// Weights p_k plus phase differences (delta12, delta23, delta31) in (-pi, pi].
struct PDelta {
  std::array<double, 3> p{};
  std::array<double, 3> delta{};

  /// Throws ConstraintViolation if the weights are not a distribution, the
  /// angles do not sum to 0 mod 2 pi, or the weighted cosine sum is nonzero.
  void validate(double tol = kParamTol) const;
};

/// z_1..z_6 in the order Q1..Q6 of symmetric_group(3).
struct S3Coeffs {
  std::array<cplx, 6> z{};

  CoeffVector to_coeff_vector() const;
  static S3Coeffs from_coeff_vector(const CoeffVector& v);
  /// True iff sum_i z_i L_i is unitary within tol.
  bool is_unitary(double tol = 1e-10) const;
  /// max |Re(z1 conj z4)|, |Re(z2 conj z5)|, |Re(z3 conj z6)|.
  double independence_residual() const;
};

/// rho_outer box_a (rho_innerleft box_a' rho_innerright), with
/// ordering 1: 1 (2 3), ordering 2: 2 (3 1), ordering 3: 3 (1 2).
/// Sign bit 0 selects the + operation, 1 the - operation.
struct NestedSpec {
  int ordering = 1;
  double a = 0.0;
  double a_prime = 0.0;
  int s = 0;
  int s_prime = 0;

  void validate() const;
  friend bool operator==(const NestedSpec&, const NestedSpec&) = default;
};

// --- binary combination -----------------------------------------------------

/// sqrt(lambda) I + sign i sqrt(1 - lambda) S on two qudits.
CMatrix partial_swap_unitary(double lambda, int d, int sign = +1);

/// lambda rho1 + (1 - lambda) rho2 + sign sqrt(lambda (1 - lambda)) i [rho2, rho1].
DensityMatrix combine2(const DensityMatrix& rho1, const DensityMatrix& rho2, double lambda, int sign = +1);

/// Tr_2[U_lambda (rho1 (x) rho2) U_lambda^dagger], computed explicitly.
DensityMatrix combine2_bruteforce(const DensityMatrix& rho1, const DensityMatrix& rho2, double lambda,
                                  int sign = +1);

/// Writing z1 I + z2 S = e^{i phi} (sqrt(lambda) I + sign i sqrt(1 - lambda) S).
struct SwapCombination {
  double phi = 0.0;
  double lambda = 0.0;
  int sign = +1;
};
/// Recovers (phi, lambda, sign) from z1 I + z2 S. Throws
/// NonUnitaryCoefficients if the combination is not unitary.
SwapCombination decompose_swap_combination(cplx z1, cplx z2, double tol = 1e-10);

// --- ternary combination -----------------------------------------------------

/// Builds U = sum z_i Q_i for local dimension d <= 8, conjugates the product
/// state and traces out systems 2 and 3. Throws NonUnitaryCoefficients if z
/// is not unitary.
DensityMatrix combine3_bruteforce(const DensityMatrix& rho1, const DensityMatrix& rho2, const DensityMatrix& rho3,
                                  const S3Coeffs& z);

/// The 36-term expansion, valid for any z; includes the Tr(rho_i rho_j)
/// weighted first-order terms.
CMatrix combine3_magic(const CMatrix& rho1, const CMatrix& rho2, const CMatrix& rho3, const S3Coeffs& z);

/// Nine-term closed form in q.
DensityMatrix combine3_closed(const DensityMatrix& rho1, const DensityMatrix& rho2, const DensityMatrix& rho3,
                              const QTriple& q);
/// The same map in the (p, delta) parametrization.
DensityMatrix combine3_closed(const DensityMatrix& rho1, const DensityMatrix& rho2, const DensityMatrix& rho3,
                              const PDelta& pd);

// --- parametrizations ---------------------------------------------------------

/// Coefficients synthesized from U1 = e^{i phi1}, U2 = e^{i phi2},
/// U3 = [[a, c], [-conj c, conj a]]. Throws ConstraintViolation unless
/// |a|^2 + |c|^2 = 1 within kParamTol.
S3Coeffs s3_coeffs_from_phases(double phi1, double phi2, cplx a, cplx c);

/// q_k = z_k + z_{k+3}, rotated into the sum-one gauge. Throws GaugeViolation
/// unless z1..z3 are real and z4..z6 imaginary within kParamTol.
QTriple q_from_z(const S3Coeffs& z);
/// (Re q1, Re q2, Re q3, i Im q1, i Im q2, i Im q3).
S3Coeffs z_from_q(const QTriple& q);

/// p_k = |q_k|^2 and delta_ij = arg q_i - arg q_j. Throws DegenerateWeight
/// (carrying the weights) when some p_k vanishes.
PDelta pdelta_from_q(const QTriple& q);
/// Inverse of pdelta_from_q, landing in the sum-one gauge.
QTriple q_from_pdelta(const PDelta& pd);

/// Uniform draw of (phi, a, c) pushed through q = ((e^{i phi} + 2a)/3,
/// (e^{i phi} - a - sqrt3 c)/3, (e^{i phi} - a + sqrt3 c)/3).
QTriple sample_q(std::mt19937_64& rng);

/// True iff sum a^2 + sum b^2 = 1 and a1a2 + a2a3 + a3a1 + b1b2 + b2b3 + b3b1 = 0
/// within tol, i.e. z = (a1, a2, a3, i b1, i b2, i b3) is unitary.
bool verify_real_imag_param(const std::array<double, 3>& a, const std::array<double, 3>& b, double tol = 1e-10);

// --- structure of the output --------------------------------------------------

/// max |op(V rho_i V^dagger) - V op(rho_i) V^dagger|.
double covariance_check(const std::function<CMatrix(std::span<const CMatrix>)>& op, const CMatrix& v,
                        std::span<const CMatrix> inputs);

/// The third-order block equals x i[rho1, i[rho2, rho3]] + y i[i[rho1, rho2], rho3]
/// with (x, y) = (Re q1 conj q2, Re q2 conj q3). Throws CoefficientSumNonzero
/// when the three Re(q_i conj q_j) do not sum to zero.
std::pair<double, double> third_order_reduce(const QTriple& q);
/// Same, on raw complex coefficients (no gauge assumptions).
std::pair<double, double> third_order_reduce(const std::array<cplx, 3>& q);

/// Evaluates the two-level nested combination.
DensityMatrix nested_expand(const NestedSpec& spec, const DensityMatrix& rho1, const DensityMatrix& rho2,
                            const DensityMatrix& rho3);

/// (a, a') with a = p_outer and a' = p_innerleft / (1 - p_outer).
/// Throws DegenerateOuterWeight when p_outer = 1.
std::pair<double, double> nested_params_for_weights(const std::array<double, 3>& p, int ordering);

/// Output weights of a nested spec, indexed by state.
std::array<double, 3> nested_weights(const NestedSpec& spec);

/// The (p, delta) point at which the ternary map reproduces `spec`.
/// Requires all three weights nonzero (DegenerateWeight otherwise).
PDelta delta_from_nested(const NestedSpec& spec);

/// Recognizes nested points (some |cos delta_ij| < tol) and returns the
/// matching spec; throws NotNested otherwise.
NestedSpec nested_from_delta(const PDelta& pd, double tol = 1e-9);

/// Reduces an angle into (-pi, pi].
double wrap_angle(double x);

}  // namespace qmix

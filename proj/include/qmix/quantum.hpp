// Density matrices and the operations the combination maps are built from.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qmix/common.hpp"

namespace qmix {

/// Residuals used to decide whether a matrix is a valid state.
struct StateDiagnostics {
  double trace_error = 0.0;        // |Tr M - 1|
  double hermiticity_error = 0.0;  // max |M - M^dagger|
  double min_eigenvalue = 0.0;
};

StateDiagnostics diagnose_state(const CMatrix& m);

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPsdTol = -1e-9;

  /// Throws ConstraintViolation if m is not a state within the tolerances.
  explicit DensityMatrix(CMatrix m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  operator const CMatrix&() const noexcept { return m_; }

  static bool is_valid(const CMatrix& m);

 private:
  CMatrix m_;
};

/// Eigenvalues of a Hermitian matrix in ascending order.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m);

/// Kronecker product of the factors, first factor most significant.
DensityMatrix tensor(std::span<const DensityMatrix> factors, std::int64_t max_dim = 4096);
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Partial trace of a d^n x d^n matrix, keeping the 1-based subsystems in
/// `keep` (in increasing order in the result).
CMatrix partial_trace(const CMatrix& m, const std::vector<int>& keep, int d, int n);

CMatrix commutator(const CMatrix& a, const CMatrix& b);
/// [a, [b, c]]
CMatrix double_commutator(const CMatrix& a, const CMatrix& b, const CMatrix& c);

/// G G^dagger / Tr(G G^dagger) with G a complex Gaussian d x rank matrix.
DensityMatrix random_density(int d, int rank, std::mt19937_64& rng);
DensityMatrix random_density(int d, int rank, std::uint64_t seed);
inline DensityMatrix random_density(int d, std::mt19937_64& rng) { return random_density(d, d, rng); }

/// A symmetric function of the spectrum.
struct EntropyFunctional {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> evaluate;
  /// Largest dimension on which f is concave; 0 means every dimension.
  int concave_max_dim = 0;

  bool concave_at(int d) const { return concave_max_dim == 0 || d <= concave_max_dim; }
};

EntropyFunctional von_neumann_entropy();
/// Renyi entropy of order alpha; alpha restricted to (0, 2]. Concave in every
/// dimension for alpha < 1 but only on qubits for 1 < alpha <= 2. Throws
/// InvalidArgument outside (0, 2].
EntropyFunctional renyi_entropy(double alpha);
/// -Tr(rho^2).
EntropyFunctional negated_purity();

/// von_neumann, renyi_0.5, renyi_2, neg_purity.
std::vector<EntropyFunctional> entropy_registry();
/// Looks up a registry entry by name; throws InvalidArgument if unknown.
EntropyFunctional entropy_by_name(const std::string& name);

/// Applies f to the eigenvalues of rho, clamped to [0, 1].
double entropy(const EntropyFunctional& f, const CMatrix& rho);

/// (I + x X + y Y + z Z) / 2.
CMatrix bloch_state(double x, double y, double z);
/// (Tr rho X, Tr rho Y, Tr rho Z) for a 2x2 matrix.
std::array<double, 3> bloch_vector(const CMatrix& rho);

}  // namespace qmix

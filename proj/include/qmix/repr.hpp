// Irreducible representations, the group Fourier transform and the
// correspondence between unitary elements of C[G] and tuples of irrep-sized
// unitaries.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qmix/common.hpp"
#include "qmix/groups.hpp"

namespace qmix {

/// A unitary matrix representation g -> tau(g).
struct Irrep {
  std::string label;
  int dim = 0;
  std::vector<CMatrix> matrices;  // indexed by element id

  const CMatrix& operator()(int g) const { return matrices.at(static_cast<std::size_t>(g)); }
  cplx character(int g) const { return matrices.at(static_cast<std::size_t>(g)).trace(); }
};

/// Complete set of inequivalent irreps of a group.
class IrrepSet {
 public:
  /// Validates unitarity, the homomorphism property, sum of squared
  /// dimensions, and orthogonality of characters.
  IrrepSet(FiniteGroup group, std::vector<Irrep> irreps);

  const FiniteGroup& group() const noexcept { return group_; }
  const std::vector<Irrep>& irreps() const noexcept { return irreps_; }
  std::size_t size() const noexcept { return irreps_.size(); }
  const Irrep& operator[](std::size_t k) const { return irreps_.at(k); }

 private:
  FiniteGroup group_;
  std::vector<Irrep> irreps_;
};

/// Throws InvalidArgument when `irrep` fails unitarity (1e-12) or the
/// homomorphism property on `group`.
void validate_irrep(const FiniteGroup& group, const Irrep& irrep);

/// One unitary per irrep, in IrrepSet order.
struct BlockUnitaries {
  std::vector<CMatrix> blocks;
};

/// Trivial, sign and the real two-dimensional irrep of S_3, with elements in
/// the order of symmetric_group(3).
IrrepSet irreps_s3();
/// The two-dimensional irrep of S_3 in the basis where the 3-cycles are
/// diagonal (entries in powers of omega = exp(2 pi i / 3)). Equivalent to the
/// third member of irreps_s3(); kept for character cross-checks.
Irrep irrep_s3_tau3_prime();

/// tau_k(g) = exp(2 pi i k g / n) for k = 0..n-1.
IrrepSet irreps_cyclic(int n);

/// Unitary |G|x|G| Fourier matrix. Row (tau, j, k) is ordered by irrep, then
/// j, then k; entries sqrt(d_tau/|G|) tau(g)_{jk}.
CMatrix fourier_matrix(const IrrepSet& irreps);

/// Conjugates m into the Fourier basis and reads off B_tau from the
/// B_tau (x) I_{d_tau} block structure. Throws NotBlockDiagonal when the
/// residual exceeds tol.
std::vector<CMatrix> block_decompose(const CMatrix& m, const IrrepSet& irreps, double tol = 1e-10);

/// z_g = sum_tau (d_tau/|G|) Tr(tau(g)^dagger U_tau).
/// Throws NonUnitaryBlock when an input block is not unitary within tol.
CoeffVector synthesize_coeffs(const BlockUnitaries& blocks, const IrrepSet& irreps, double tol = 1e-10);

/// B_tau = sum_g z_g tau(g) without any unitarity check.
BlockUnitaries fourier_blocks(const CoeffVector& z, const IrrepSet& irreps);

/// Like fourier_blocks, but throws NonUnitaryBlock naming the first irrep
/// whose block is not unitary within tol. Succeeds iff sum_g z_g L_g is
/// unitary.
BlockUnitaries extract_blocks(const CoeffVector& z, const IrrepSet& irreps, double tol = 1e-10);

/// Default cap on the side length of tensor_rep matrices.
inline constexpr std::int64_t kMaxTensorDim = 4096;

/// Q_pi on (C^d)^{(x) n} with n = p.size():
/// |i_1 .. i_n> -> |i_{pi^-1(1)} .. i_{pi^-1(n)}>.
CMatrix tensor_rep(const Perm& p, int d, std::int64_t max_dim = kMaxTensorDim);

/// Sum_pi z_pi Q_pi for a CoeffVector over a permutation group.
CMatrix tensor_lincomb(const CoeffVector& z, int d, std::int64_t max_dim = kMaxTensorDim);

/// Haar-random d x d unitary (QR of a complex Gaussian matrix with the
/// phases of R's diagonal folded back in).
CMatrix haar_unitary(int d, std::mt19937_64& rng);

/// Haar-random block per irrep.
BlockUnitaries random_blocks(const IrrepSet& irreps, std::mt19937_64& rng);

struct FlatSearchOptions {
  int attempts = 2000;
  std::uint64_t seed = 1;
  double flat_tol = 1e-8;
};

/// Randomized multi-start search for z in C[S_3] with sum_g z_g L_g unitary
/// and |z_g| = 1/sqrt(6) for all g. Each start draws (phi1, phi2, a, c) and
/// minimizes sum_g (|z_g|^2 - 1/6)^2 with Nelder-Mead. Returned solutions
/// are deduplicated and sorted.
std::vector<CoeffVector> flat_unitary_search(const IrrepSet& s3, const FlatSearchOptions& opts);

}  // namespace qmix

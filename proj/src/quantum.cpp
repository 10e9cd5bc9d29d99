#include "qmix/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace qmix {

StateDiagnostics diagnose_state(const CMatrix& m) {
  StateDiagnostics d;
  if (m.rows() != m.cols() || m.rows() == 0) {
    d.trace_error = d.hermiticity_error = std::numeric_limits<double>::infinity();
    d.min_eigenvalue = -std::numeric_limits<double>::infinity();
    return d;
  }
  d.trace_error = std::abs(m.trace() - cplx(1.0));
  d.hermiticity_error = max_abs(m - m.adjoint());
  const CMatrix h = 0.5 * (m + m.adjoint());
  d.min_eigenvalue = hermitian_eigenvalues(h)(0);
  return d;
}

bool DensityMatrix::is_valid(const CMatrix& m) {
  const StateDiagnostics d = diagnose_state(m);
  return d.hermiticity_error <= kHermitianTol && d.trace_error <= kTraceTol && d.min_eigenvalue >= kPsdTol;
}

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
  const StateDiagnostics d = diagnose_state(m_);
  if (d.hermiticity_error > kHermitianTol)
    throw ConstraintViolation("density matrix is not Hermitian (residual " + std::to_string(d.hermiticity_error) + ")");
  if (d.trace_error > kTraceTol)
    throw ConstraintViolation("density matrix trace differs from 1 by " + std::to_string(d.trace_error));
  if (d.min_eigenvalue < kPsdTol)
    throw ConstraintViolation("density matrix has negative eigenvalue " + std::to_string(d.min_eigenvalue));
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix tensor(std::span<const DensityMatrix> factors, std::int64_t max_dim) {
  if (factors.empty()) throw InvalidArgument("tensor: no factors");
  std::int64_t dim = 1;
  for (const auto& f : factors) {
    dim *= f.dim();
    if (dim > max_dim) throw InvalidArgument("tensor: total dimension exceeds the size cap");
  }
  CMatrix out = factors[0].matrix();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k].matrix());
  return DensityMatrix(std::move(out));
}

CMatrix partial_trace(const CMatrix& m, const std::vector<int>& keep, int d, int n) {
  if (d < 1 || n < 1) throw InvalidArgument("partial_trace: d and n must be positive");
  std::int64_t full = 1;
  for (int i = 0; i < n; ++i) full *= d;
  if (m.rows() != full || m.cols() != full) throw InvalidArgument("partial_trace: matrix is not d^n x d^n");
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int s : keep) {
    if (s < 1 || s > n || kept[static_cast<std::size_t>(s - 1)])
      throw InvalidArgument("partial_trace: bad subsystem index " + std::to_string(s));
    kept[static_cast<std::size_t>(s - 1)] = true;
  }
  std::vector<int> keep_order, trace_order;
  for (int s = 1; s <= n; ++s) (kept[static_cast<std::size_t>(s - 1)] ? keep_order : trace_order).push_back(s);

  std::int64_t kdim = 1, tdim = 1;
  for (std::size_t i = 0; i < keep_order.size(); ++i) kdim *= d;
  for (std::size_t i = 0; i < trace_order.size(); ++i) tdim *= d;

  // Weight of subsystem s in the big-endian full index.
  std::vector<std::int64_t> weight(static_cast<std::size_t>(n));
  std::int64_t w = 1;
  for (int s = n; s >= 1; --s) {
    weight[static_cast<std::size_t>(s - 1)] = w;
    w *= d;
  }
  auto embed = [&](const std::vector<int>& subsystems, std::int64_t idx) {
    std::int64_t off = 0;
    for (auto it = subsystems.rbegin(); it != subsystems.rend(); ++it) {
      off += (idx % d) * weight[static_cast<std::size_t>(*it - 1)];
      idx /= d;
    }
    return off;
  };
  std::vector<std::int64_t> keep_off(static_cast<std::size_t>(kdim)), trace_off(static_cast<std::size_t>(tdim));
  for (std::int64_t i = 0; i < kdim; ++i) keep_off[static_cast<std::size_t>(i)] = embed(keep_order, i);
  for (std::int64_t t = 0; t < tdim; ++t) trace_off[static_cast<std::size_t>(t)] = embed(trace_order, t);

  CMatrix out = CMatrix::Zero(kdim, kdim);
  for (std::int64_t a = 0; a < kdim; ++a)
    for (std::int64_t b = 0; b < kdim; ++b) {
      cplx s = 0.0;
      for (std::int64_t t = 0; t < tdim; ++t) {
        const auto to = trace_off[static_cast<std::size_t>(t)];
        s += m(keep_off[static_cast<std::size_t>(a)] + to, keep_off[static_cast<std::size_t>(b)] + to);
      }
      out(a, b) = s;
    }
  return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw InvalidArgument("commutator: dimension mismatch");
  return a * b - b * a;
}

CMatrix double_commutator(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  return commutator(a, commutator(b, c));
}

DensityMatrix random_density(int d, int rank, std::mt19937_64& rng) {
  if (d < 1 || rank < 1 || rank > d) throw InvalidArgument("random_density: need 1 <= rank <= d");
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix(std::move(rho));
}

DensityMatrix random_density(int d, int rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_density(d, rank, rng);
}

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

EntropyFunctional von_neumann_entropy() {
  return {"von_neumann", [](const Eigen::VectorXd& ev) {
            double s = 0.0;
            for (int i = 0; i < ev.size(); ++i) {
              const double p = clamp01(ev(i));
              if (p > 0.0) s -= p * std::log(p);
            }
            return s;
          }};
}

EntropyFunctional renyi_entropy(double alpha) {
  if (!(alpha > 0.0) || alpha > 2.0 || alpha == 1.0)
    throw InvalidArgument("renyi_entropy: alpha must lie in (0, 1) or (1, 2]");
  std::string name = "renyi_" + std::to_string(alpha);
  if (alpha == 0.5) name = "renyi_0.5";
  if (alpha == 2.0) name = "renyi_2";
  return {name, [alpha](const Eigen::VectorXd& ev) {
            double s = 0.0;
            for (int i = 0; i < ev.size(); ++i) {
              const double p = clamp01(ev(i));
              if (p > 0.0) s += std::pow(p, alpha);
            }
            return std::log(s) / (1.0 - alpha);
          },
          alpha > 1.0 ? 2 : 0};
}

EntropyFunctional negated_purity() {
  return {"neg_purity", [](const Eigen::VectorXd& ev) {
            double s = 0.0;
            for (int i = 0; i < ev.size(); ++i) s += clamp01(ev(i)) * clamp01(ev(i));
            return -s;
          }};
}

std::vector<EntropyFunctional> entropy_registry() {
  return {von_neumann_entropy(), renyi_entropy(0.5), renyi_entropy(2.0), negated_purity()};
}

EntropyFunctional entropy_by_name(const std::string& name) {
  for (auto& f : entropy_registry())
    if (f.name == name) return f;
  throw InvalidArgument("unknown entropy functional '" + name + "'");
}

double entropy(const EntropyFunctional& f, const CMatrix& rho) {
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  return f.evaluate(hermitian_eigenvalues(h));
}

CMatrix bloch_state(double x, double y, double z) {
  CMatrix m(2, 2);
  m << cplx(1.0 + z, 0.0), cplx(x, -y), cplx(x, y), cplx(1.0 - z, 0.0);
  return 0.5 * m;
}

std::array<double, 3> bloch_vector(const CMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw InvalidArgument("bloch_vector: expects a 2x2 matrix");
  return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

}  // namespace qmix

#include "qmix/io.hpp"

namespace qmix {

namespace {

template <std::size_t N>
std::array<double, N> reals(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N) throw InvalidArgument(std::string(what) + ": expected " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t k = 0; k < N; ++k) out[k] = j.at(k).get<double>();
  return out;
}

}  // namespace

json to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  const auto v = reals<2>(j, "complex");
  return {v[0], v[1]};
}

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("matrix: expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto m = static_cast<Eigen::Index>(j.at(0).size());
  CMatrix out(n, m);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) throw InvalidArgument("matrix: ragged rows");
    for (Eigen::Index k = 0; k < m; ++k) out(r, k) = complex_from_json(row.at(static_cast<std::size_t>(k)));
  }
  return out;
}

json to_json(const CoeffVector& z) {
  json out = json::array();
  for (int g = 0; g < z.group.order(); ++g) out.push_back(to_json(z[g]));
  return out;
}

json to_json(const QTriple& q) {
  return {{"q", json::array({to_json(q[0]), to_json(q[1]), to_json(q[2])})}};
}

QTriple qtriple_from_json(const json& j) {
  const json& a = j.contains("q") ? j.at("q") : j;
  if (!a.is_array() || a.size() != 3) throw InvalidArgument("q: expected three complex numbers");
  return QTriple::from_any_gauge({complex_from_json(a[0]), complex_from_json(a[1]), complex_from_json(a[2])});
}

json to_json(const PDelta& pd) { return {{"p", pd.p}, {"delta", pd.delta}}; }

PDelta pdelta_from_json(const json& j) {
  PDelta pd;
  pd.p = reals<3>(j.at("p"), "p");
  pd.delta = reals<3>(j.at("delta"), "delta");
  pd.validate();
  return pd;
}

json to_json(const NestedSpec& s) {
  return {{"ordering", s.ordering}, {"a", s.a}, {"a_prime", s.a_prime}, {"s", s.s}, {"s_prime", s.s_prime}};
}

NestedSpec nested_from_json(const json& j) {
  NestedSpec s;
  s.ordering = j.at("ordering").get<int>();
  s.a = j.at("a").get<double>();
  s.a_prime = j.at("a_prime").get<double>();
  s.s = j.value("s", 0);
  s.s_prime = j.value("s_prime", 0);
  s.validate();
  return s;
}

json group_to_json(const FiniteGroup& g) {
  json table = json::array();
  for (int a = 0; a < g.order(); ++a) {
    json row = json::array();
    for (int b = 0; b < g.order(); ++b) row.push_back(g.mul(a, b));
    table.push_back(std::move(row));
  }
  json labels = json::array();
  for (int a = 0; a < g.order(); ++a) labels.push_back(g.label(a));
  return {{"order", g.order()}, {"table", std::move(table)}, {"labels", std::move(labels)}};
}

FiniteGroup group_from_json(const json& j) {
  const int order = j.at("order").get<int>();
  auto table = j.at("table").get<std::vector<std::vector<int>>>();
  if (static_cast<int>(table.size()) != order) throw InvalidArgument("group: table size does not match order");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return FiniteGroup(std::move(table), std::move(labels));
}

json irreps_to_json(const IrrepSet& irreps) {
  json out = json::array();
  for (const auto& t : irreps.irreps()) {
    json mats = json::array();
    for (const auto& m : t.matrices) mats.push_back(to_json(m));
    out.push_back({{"label", t.label}, {"dim", t.dim}, {"matrices", std::move(mats)}});
  }
  return out;
}

IrrepSet irreps_from_json(const json& j, const FiniteGroup& group) {
  std::vector<Irrep> irreps;
  for (const auto& t : j) {
    Irrep irrep;
    irrep.label = t.at("label").get<std::string>();
    irrep.dim = t.at("dim").get<int>();
    for (const auto& m : t.at("matrices")) irrep.matrices.push_back(matrix_from_json(m));
    irreps.push_back(std::move(irrep));
  }
  return IrrepSet(group, std::move(irreps));
}

DensityMatrix density_from_json(const json& j) {
  if (j.is_object() && j.contains("bloch")) {
    const auto v = reals<3>(j.at("bloch"), "bloch");
    return DensityMatrix(bloch_state(v[0], v[1], v[2]));
  }
  return DensityMatrix(matrix_from_json(j));
}

json diagnostics_json(const CMatrix& m) {
  const StateDiagnostics d = diagnose_state(m);
  return {{"trace_error", d.trace_error},
          {"hermiticity_error", d.hermiticity_error},
          {"min_eigenvalue", d.min_eigenvalue},
          {"valid", DensityMatrix::is_valid(m)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qmix

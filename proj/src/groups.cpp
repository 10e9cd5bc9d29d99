#include "qmix/groups.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace qmix {

double unitarity_residual(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const CMatrix r = u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols());
  return max_abs(r);
}

Perm::Perm(std::vector<int> images) : images_(std::move(images)) {
  const int n = size();
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)])
      throw InvalidArgument("Perm: images must be a bijection on {1.." + std::to_string(n) + "}");
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
}

Perm Perm::identity(int n) {
  std::vector<int> im(static_cast<std::size_t>(n));
  std::iota(im.begin(), im.end(), 1);
  return Perm(std::move(im));
}

bool Perm::is_identity() const noexcept {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i) + 1) return false;
  return true;
}

Perm perm_compose(const Perm& p, const Perm& q) {
  if (p.size() != q.size()) throw InvalidArgument("perm_compose: size mismatch");
  std::vector<int> im(static_cast<std::size_t>(p.size()));
  for (int i = 1; i <= p.size(); ++i) im[static_cast<std::size_t>(i - 1)] = p(q(i));
  return Perm(std::move(im));
}

Perm perm_inverse(const Perm& p) {
  std::vector<int> im(static_cast<std::size_t>(p.size()));
  for (int i = 1; i <= p.size(); ++i) im[static_cast<std::size_t>(p(i) - 1)] = i;
  return Perm(std::move(im));
}

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> labels,
                         std::vector<Perm> perms) {
  const int n = static_cast<int>(table.size());
  if (n < 1) throw InvalidArgument("FiniteGroup: empty Cayley table");
  auto data = std::make_shared<Data>();
  data->order = n;
  data->table.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw InvalidArgument("FiniteGroup: Cayley table is not square");
    for (int v : row) {
      if (v < 0 || v >= n) throw InvalidArgument("FiniteGroup: table entry out of range");
      data->table.push_back(v);
    }
  }
  auto at = [&](int g, int h) { return data->table[static_cast<std::size_t>(g * n + h)]; };

  // Latin square: every row and every column is a permutation.
  for (int g = 0; g < n; ++g) {
    std::vector<bool> row_seen(static_cast<std::size_t>(n)), col_seen(static_cast<std::size_t>(n));
    for (int h = 0; h < n; ++h) {
      auto r = static_cast<std::size_t>(at(g, h));
      auto c = static_cast<std::size_t>(at(h, g));
      if (row_seen[r] || col_seen[c]) throw InvalidArgument("FiniteGroup: Cayley table is not a Latin square");
      row_seen[r] = col_seen[c] = true;
    }
  }

  int e = -1;
  for (int g = 0; g < n && e < 0; ++g) {
    bool ok = true;
    for (int h = 0; h < n && ok; ++h) ok = at(g, h) == h && at(h, g) == h;
    if (ok) e = g;
  }
  if (e < 0) throw InvalidArgument("FiniteGroup: no two-sided identity");
  data->identity = e;

  data->inverse.assign(static_cast<std::size_t>(n), -1);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (at(h, g) == e) {
        if (at(g, h) != e) throw InvalidArgument("FiniteGroup: left and right inverses differ");
        data->inverse[static_cast<std::size_t>(g)] = h;
      }

  if (n <= 24) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (at(at(a, b), c) != at(a, at(b, c))) throw InvalidArgument("FiniteGroup: table is not associative");
  }

  if (labels.empty()) {
    for (int g = 0; g < n; ++g) labels.push_back("g" + std::to_string(g));
  } else if (static_cast<int>(labels.size()) != n) {
    throw InvalidArgument("FiniteGroup: label count does not match order");
  }
  if (!perms.empty() && static_cast<int>(perms.size()) != n)
    throw InvalidArgument("FiniteGroup: permutation count does not match order");
  data->labels = std::move(labels);
  data->perms = std::move(perms);
  data_ = std::move(data);
}

void FiniteGroup::check(int g) const {
  if (g < 0 || g >= data_->order)
    throw InvalidArgument("invalid element id " + std::to_string(g) + " for group of order " +
                          std::to_string(data_->order));
}

const Perm& FiniteGroup::perm(int g) const {
  check(g);
  if (data_->perms.empty()) throw InvalidArgument("group has no permutation realization");
  return data_->perms[static_cast<std::size_t>(g)];
}

std::vector<std::vector<int>> FiniteGroup::table() const {
  const int n = data_->order;
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g)
    out[static_cast<std::size_t>(g)].assign(data_->table.begin() + g * n, data_->table.begin() + (g + 1) * n);
  return out;
}

namespace {

FiniteGroup group_from_perms(std::vector<Perm> perms, std::vector<std::string> labels) {
  const auto n = perms.size();
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const Perm gh = perm_compose(perms[g], perms[h]);
      auto it = std::find(perms.begin(), perms.end(), gh);
      table[g][h] = static_cast<int>(it - perms.begin());
    }
  return FiniteGroup(std::move(table), std::move(labels), std::move(perms));
}

}  // namespace

FiniteGroup symmetric_group(int n) {
  if (n < 1 || n > 5) throw InvalidArgument("symmetric_group: n must be in [1, 5]");
  std::vector<Perm> perms;
  std::vector<std::string> labels;
  if (n == 3) {
    const std::vector<std::vector<int>> order = {{1, 2, 3}, {3, 1, 2}, {2, 3, 1},
                                                 {1, 3, 2}, {2, 1, 3}, {3, 2, 1}};
    for (std::size_t k = 0; k < order.size(); ++k) {
      perms.emplace_back(order[k]);
      labels.push_back("Q" + std::to_string(k + 1));
    }
  } else {
    std::vector<int> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 1);
    do {
      perms.emplace_back(im);
      std::string s = "[";
      for (std::size_t i = 0; i < im.size(); ++i) s += (i ? "," : "") + std::to_string(im[i]);
      labels.push_back(s + "]");
    } while (std::next_permutation(im.begin(), im.end()));
  }
  return group_from_perms(std::move(perms), std::move(labels));
}

FiniteGroup cyclic_group(int n) {
  if (n < 1) throw InvalidArgument("cyclic_group: n must be positive");
  std::vector<std::vector<int>> table(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i + j) % n;
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("g" + std::to_string(i));
  if (n == 2) labels = {"I", "X"};
  return FiniteGroup(std::move(table), std::move(labels));
}

CoeffVector::CoeffVector(FiniteGroup g, CVector c) : group(std::move(g)), coeffs(std::move(c)) {
  if (coeffs.size() != group.order()) throw InvalidArgument("CoeffVector: length must equal group order");
}

CoeffVector CoeffVector::indicator(const FiniteGroup& g, int element) {
  g.check(element);
  CVector c = CVector::Zero(g.order());
  c(element) = 1.0;
  return CoeffVector(g, std::move(c));
}

CMatrix left_regular(const FiniteGroup& group, int g) {
  group.check(g);
  const int n = group.order();
  CMatrix m = CMatrix::Zero(n, n);
  // Column y holds the basis vector |g·y>.
  for (int y = 0; y < n; ++y) m(group.mul(g, y), y) = 1.0;
  return m;
}

CMatrix right_regular(const FiniteGroup& group, int g) {
  group.check(g);
  const int n = group.order();
  const int ginv = group.inverse(g);
  CMatrix m = CMatrix::Zero(n, n);
  for (int y = 0; y < n; ++y) m(group.mul(y, ginv), y) = 1.0;
  return m;
}

CMatrix regular_lincomb(const CoeffVector& z) {
  const FiniteGroup& group = z.group;
  const int n = group.order();
  CMatrix m = CMatrix::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) m(x, y) = z.coeffs(group.mul(x, group.inverse(y)));
  return m;
}

}  // namespace qmix

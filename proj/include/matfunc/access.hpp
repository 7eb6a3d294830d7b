// Copyright 2026 The matfunc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "matfunc/core.hpp"
#include "matfunc/dense.hpp"
#include "matfunc/dense_oracle.hpp"
#include "matfunc/pauli.hpp"
#include "matfunc/random.hpp"

namespace matfunc {

/// Declared properties of a matrix. Algorithms trust these; `audit` checks them.
struct MatrixMeta {
  std::optional<double> one_norm;
  std::optional<double> op_norm;
  std::optional<double> pauli_norm;
  std::optional<double> kappa;
  std::optional<double> eta;  // declared spectral gap: ||A|| <= 1 - eta
};

/// Sparse access: neighbor callables plus an entry callable.
///
/// row_neighbor(i, k) is the column of the k-th non-zero of row i and
/// col_neighbor(j, l) the row of the l-th non-zero of column j; both return
/// nullopt past the end. Callables must be pure and thread-safe.
struct SparseOracle {
  using NeighborFn = std::function<std::optional<index_t>(index_t, int)>;
  using EntryFn = std::function<cplx(index_t, index_t)>;

  index_t dim = 0;
  int sparsity = 0;
  NeighborFn row_neighbor;
  NeighborFn col_neighbor;
  EntryFn entry;
  MatrixMeta meta;
};

/// Non-zero entries of column j as (row, value).
inline std::vector<std::pair<index_t, cplx>> column_entries(const SparseOracle& o, index_t j) {
  std::vector<std::pair<index_t, cplx>> out;
  for (int l = 0; l < o.sparsity; ++l) {
    const auto i = o.col_neighbor(j, l);
    if (!i) break;
    const cplx v = o.entry(*i, j);
    if (v != 0.0) out.emplace_back(*i, v);
  }
  return out;
}

/// Non-zero entries of row i as (column, value).
inline std::vector<std::pair<index_t, cplx>> row_entries(const SparseOracle& o, index_t i) {
  std::vector<std::pair<index_t, cplx>> out;
  for (int k = 0; k < o.sparsity; ++k) {
    const auto j = o.row_neighbor(i, k);
    if (!j) break;
    const cplx v = o.entry(i, *j);
    if (v != 0.0) out.emplace_back(*j, v);
  }
  return out;
}

/// Sum_i |A_ij| from at most s column entries.
inline double column_abs_sum(const SparseOracle& o, index_t j) {
  double s = 0.0;
  for (const auto& [i, v] : column_entries(o, j)) s += std::abs(v);
  return s;
}

/// Sparse oracle over an explicit triplet list (duplicates are summed).
inline SparseOracle sparse_from_triplets(index_t dim, const std::vector<std::tuple<index_t, index_t, cplx>>& triplets,
                                         MatrixMeta meta = {}) {
  struct Store {
    std::vector<std::vector<std::pair<index_t, cplx>>> rows, cols;
  };
  auto st = std::make_shared<Store>();
  st->rows.resize(dim);
  st->cols.resize(dim);
  std::map<std::pair<index_t, index_t>, cplx> acc;
  for (const auto& [i, j, v] : triplets) {
    if (i >= dim || j >= dim) throw PreconditionError("triplet index out of range");
    acc[{i, j}] += v;
  }
  for (const auto& [ij, v] : acc) {
    if (v == 0.0) continue;
    st->rows[ij.first].emplace_back(ij.second, v);
    st->cols[ij.second].emplace_back(ij.first, v);
  }
  int s = 0;
  for (index_t k = 0; k < dim; ++k)
    s = std::max<int>(s, static_cast<int>(std::max(st->rows[k].size(), st->cols[k].size())));
  SparseOracle o;
  o.dim = dim;
  o.sparsity = std::max(s, 1);
  o.row_neighbor = [st](index_t i, int k) -> std::optional<index_t> {
    if (k < 0 || static_cast<std::size_t>(k) >= st->rows[i].size()) return std::nullopt;
    return st->rows[i][k].first;
  };
  o.col_neighbor = [st](index_t j, int l) -> std::optional<index_t> {
    if (l < 0 || static_cast<std::size_t>(l) >= st->cols[j].size()) return std::nullopt;
    return st->cols[j][l].first;
  };
  o.entry = [st](index_t i, index_t j) -> cplx {
    for (const auto& [c, v] : st->rows[i])
      if (c == j) return v;
    return 0.0;
  };
  o.meta = meta;
  return o;
}

inline SparseOracle sparse_from_dense(const DenseMatrix& d, MatrixMeta meta = {}) {
  std::vector<std::tuple<index_t, index_t, cplx>> t;
  for (std::size_t i = 0; i < d.dim(); ++i)
    for (std::size_t j = 0; j < d.dim(); ++j)
      if (d(i, j) != 0.0) t.emplace_back(i, j, d(i, j));
  return sparse_from_triplets(d.dim(), t, meta);
}

/// Densifies an oracle by scanning every row's neighbors.
inline DenseMatrix to_dense(const SparseOracle& o) {
  DenseMatrix d(o.dim);
  for (index_t i = 0; i < o.dim; ++i)
    for (const auto& [j, v] : row_entries(o, i)) d(i, j) = v;
  return d;
}

/// Pauli access with prefix sums for l1 sampling of terms.
class PauliAccess {
 public:
  PauliAccess() = default;
  explicit PauliAccess(PauliOperator op, MatrixMeta meta = {}) : op_(std::move(op)), meta_(meta) {
    lambda_ = op_.pauli_norm();
    cumulative_.reserve(op_.size());
    double s = 0.0;
    for (const auto& t : op_.terms()) {
      s += std::abs(t.coef);
      cumulative_.push_back(lambda_ > 0 ? s / lambda_ : 0.0);
    }
    if (!cumulative_.empty()) cumulative_.back() = 1.0;
    meta_.pauli_norm = lambda_;
  }

  const PauliOperator& op() const { return op_; }
  const std::vector<double>& cumulative_weights() const { return cumulative_; }
  double lambda() const { return lambda_; }
  const MatrixMeta& meta() const { return meta_; }
  MatrixMeta& meta() { return meta_; }
  int n_qubits() const { return op_.n_qubits(); }
  index_t dim() const { return op_.dim(); }

  /// Term index with probability |a_l|/lambda and its unit phase a_l/|a_l|.
  std::pair<std::size_t, cplx> sample_term(RandomStream& rng) const {
    if (lambda_ <= 0) throw PreconditionError("sample_term: zero operator");
    const double u = rng.uniform();
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                             cumulative_.begin());
    if (k >= cumulative_.size()) k = cumulative_.size() - 1;
    const cplx a = op_.terms()[k].coef;
    return {k, a / std::abs(a)};
  }

 private:
  PauliOperator op_;
  MatrixMeta meta_;
  std::vector<double> cumulative_;
  double lambda_ = 0.0;
};

/// Row sparsity <= L: row i's neighbors are the distinct i ^ x_bits.
inline SparseOracle pauli_to_sparse_oracle(const PauliAccess& p) {
  struct Group {
    std::uint64_t x;
    std::vector<PauliTerm> terms;
  };
  auto groups = std::make_shared<std::vector<Group>>();
  for (const auto& t : p.op().terms()) {
    auto it = std::find_if(groups->begin(), groups->end(),
                           [&](const Group& g) { return g.x == t.string.x_bits(); });
    if (it == groups->end())
      groups->push_back({t.string.x_bits(), {t}});
    else
      it->terms.push_back(t);
  }
  std::sort(groups->begin(), groups->end(), [](const Group& a, const Group& b) { return a.x < b.x; });
  SparseOracle o;
  o.dim = p.dim();
  o.sparsity = std::max<int>(1, static_cast<int>(groups->size()));
  auto nb = [groups](index_t i, int k) -> std::optional<index_t> {
    if (k < 0 || static_cast<std::size_t>(k) >= groups->size()) return std::nullopt;
    return i ^ (*groups)[k].x;
  };
  o.row_neighbor = nb;
  o.col_neighbor = nb;
  o.entry = [groups](index_t i, index_t j) -> cplx {
    const std::uint64_t x = i ^ j;
    for (const auto& g : *groups)
      if (g.x == x) {
        cplx s = 0.0;
        for (const auto& t : g.terms) s += t.coef * string_entry_unchecked(t.string, i, j);
        return s;
      }
    return 0.0;
  };
  o.meta = p.meta();
  o.meta.pauli_norm = p.lambda();
  return o;
}

/// Explicit list of every non-zero entry.
class SuperSparseMatrix {
 public:
  struct Entry {
    index_t i, j;
    cplx v;
  };

  SuperSparseMatrix() = default;
  SuperSparseMatrix(index_t dim, std::vector<Entry> entries, MatrixMeta meta = {})
      : dim_(dim), entries_(std::move(entries)), meta_(meta) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
    double scale = 0.0;
    for (const auto& e : entries_) scale = std::max(scale, std::abs(e.v));
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      const auto& e = entries_[k];
      if (e.i >= dim_ || e.j >= dim_) throw PreconditionError("super-sparse entry out of range");
      if (k > 0 && entries_[k - 1].i == e.i && entries_[k - 1].j == e.j)
        throw PreconditionError("super-sparse entry listed twice");
      if (std::abs(std::conj(e.v) - at(e.j, e.i)) > 1e-12 * std::max(1.0, scale))
        throw PreconditionError("super-sparse matrix lacks Hermitian closure");
    }
  }

  index_t dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t k() const { return entries_.size(); }
  const MatrixMeta& meta() const { return meta_; }
  MatrixMeta& meta() { return meta_; }

  cplx at(index_t i, index_t j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(i, j),
                               [](const Entry& e, const std::pair<index_t, index_t>& p) {
                                 return std::tie(e.i, e.j) < std::tie(p.first, p.second);
                               });
    return (it != entries_.end() && it->i == i && it->j == j) ? it->v : cplx(0.0);
  }

 private:
  index_t dim_ = 0;
  std::vector<Entry> entries_;
  MatrixMeta meta_;
};

inline SparseOracle sparse_from_supersparse(const SuperSparseMatrix& m) {
  std::vector<std::tuple<index_t, index_t, cplx>> t;
  for (const auto& e : m.entries()) t.emplace_back(e.i, e.j, e.v);
  return sparse_from_triplets(m.dim(), t, m.meta());
}

inline DenseMatrix to_dense(const SuperSparseMatrix& m) {
  DenseMatrix d(m.dim());
  for (const auto& e : m.entries()) d(e.i, e.j) = e.v;
  return d;
}

/// Induced 1-norm: the largest column sum of absolute values.
inline double induced_one_norm(const DenseMatrix& d) {
  double best = 0.0;
  for (std::size_t j = 0; j < d.dim(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.dim(); ++i) s += std::abs(d(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline double induced_one_norm(const SuperSparseMatrix& m) {
  std::map<index_t, double> col;
  for (const auto& e : m.entries()) col[e.j] += std::abs(e.v);
  double best = 0.0;
  for (const auto& [j, s] : col) best = std::max(best, s);
  return best;
}

inline double induced_one_norm(const SparseOracle& o) {
  if (o.dim > caps().dense_dim) throw CapExceeded("induced_one_norm: oracle dimension exceeds dense cap");
  double best = 0.0;
  for (index_t j = 0; j < o.dim; ++j) best = std::max(best, column_abs_sum(o, j));
  return best;
}

inline double operator_norm(const DenseMatrix& d) {
  const auto e = eig_hermitian(d);
  double m = 0.0;
  for (double v : e.values) m = std::max(m, std::abs(v));
  return m;
}

inline double condition_number(const DenseMatrix& d) {
  const auto e = eig_hermitian(d);
  double hi = 0.0, lo = INFINITY;
  for (double v : e.values) {
    hi = std::max(hi, std::abs(v));
    lo = std::min(lo, std::abs(v));
  }
  if (lo < 1e-12) throw PreconditionError("condition_number: singular matrix");
  return hi / lo;
}

struct AuditReport {
  int declared_sparsity = 0;
  int observed_row_occupancy = 0;
  int observed_col_occupancy = 0;
  bool neighbors_complete = true;  // every non-zero entry appears in the lists
  bool hermitian = true;
  std::size_t pairs_checked = 0;
  bool ok() const {
    return neighbors_complete && hermitian && observed_row_occupancy <= declared_sparsity &&
           observed_col_occupancy <= declared_sparsity;
  }
};

/// Checks declared sparsity and Hermiticity. Exhaustive mode scans all N^2
/// entries; fast mode samples min(N^2, 10^4) pairs for Hermiticity.
inline AuditReport audit(const SparseOracle& o, bool exhaustive, std::uint64_t seed = 0) {
  AuditReport r;
  r.declared_sparsity = o.sparsity;
  for (index_t k = 0; k < o.dim; ++k) {
    r.observed_row_occupancy = std::max<int>(r.observed_row_occupancy, static_cast<int>(row_entries(o, k).size()));
    r.observed_col_occupancy = std::max<int>(r.observed_col_occupancy, static_cast<int>(column_entries(o, k).size()));
  }
  if (exhaustive) {
    if (o.dim > caps().dense_dim) throw CapExceeded("audit: exhaustive scan beyond dense cap");
    for (index_t i = 0; i < o.dim; ++i) {
      const auto row = row_entries(o, i);
      for (index_t j = 0; j < o.dim; ++j) {
        const cplx v = o.entry(i, j);
        ++r.pairs_checked;
        if (std::abs(v - std::conj(o.entry(j, i))) > 1e-12) r.hermitian = false;
        if (v != 0.0 && std::none_of(row.begin(), row.end(), [j](const auto& e) { return e.first == j; }))
          r.neighbors_complete = false;
      }
    }
    return r;
  }
  RandomStream rng(seed);
  const double total = static_cast<double>(o.dim) * static_cast<double>(o.dim);
  const std::size_t n = static_cast<std::size_t>(std::min(total, 1e4));
  for (std::size_t k = 0; k < n; ++k) {
    const index_t i = rng() % o.dim, j = rng() % o.dim;
    ++r.pairs_checked;
    if (std::abs(o.entry(i, j) - std::conj(o.entry(j, i))) > 1e-12) r.hermitian = false;
  }
  return r;
}

}  // namespace matfunc

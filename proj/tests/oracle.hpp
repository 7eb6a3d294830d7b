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


// Test-side reference implementations. These avoid the library's own
// evaluators: Pauli words are built from explicit 2x2 factors, powers by
// repeated dense products, spectra by Eigen when it is available.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#ifdef MATFUNC_HAVE_EIGEN
#include <Eigen/Dense>
#endif

#include "matfunc/matfunc.hpp"

namespace oracle {

using matfunc::cplx;
using matfunc::DenseMatrix;
using matfunc::index_t;

inline DenseMatrix naive_kron(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.dim(), m = b.dim();
  DenseMatrix r(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) r(i * m + k, j * m + l) = a(i, j) * b(k, l);
  return r;
}

inline DenseMatrix pauli_2x2(char p) {
  DenseMatrix m(2);
  const cplx I(0.0, 1.0);
  switch (p) {
    case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
    case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
    case 'Y': m(0, 1) = -I; m(1, 0) = I; break;
    case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
    default: throw std::invalid_argument("pauli letter");
  }
  return m;
}

/// Leftmost letter acts on the most significant bit.
inline DenseMatrix word_matrix(const std::string& w) {
  DenseMatrix r = DenseMatrix::identity(1);
  for (char c : w) r = naive_kron(r, pauli_2x2(c));
  return r;
}

inline DenseMatrix operator_matrix(const matfunc::PauliOperator& a) {
  DenseMatrix r(a.dim());
  for (const auto& t : a.terms()) r += t.coef * word_matrix(t.string.word());
  return r;
}

inline DenseMatrix naive_mul(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.dim();
  DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += a(i, k) * b(k, j);
  return r;
}

inline DenseMatrix naive_power(const DenseMatrix& a, int m) {
  DenseMatrix r = DenseMatrix::identity(a.dim());
  for (int k = 0; k < m; ++k) r = naive_mul(r, a);
  return r;
}

/// sum_k c_k A^k.
inline DenseMatrix naive_poly(const DenseMatrix& a, const std::vector<cplx>& c) {
  DenseMatrix r(a.dim()), p = DenseMatrix::identity(a.dim());
  for (std::size_t k = 0; k < c.size(); ++k) {
    r += c[k] * p;
    p = naive_mul(p, a);
  }
  return r;
}

inline double max_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

/// <i|f^dag pi f|i> with pi the top half of the basis.
inline double lm_of(const DenseMatrix& fa, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < fa.dim() / 2; ++k) s += std::norm(fa(k, i));
  return s;
}

inline double column_norm2(const DenseMatrix& fa, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < fa.dim(); ++k) s += std::norm(fa(k, i));
  return s;
}

/// f(A) for Hermitian A. Eigen's solver when linked, else the library's.
template <class F>
DenseMatrix spectral_function(const DenseMatrix& a, F f) {
  const std::size_t n = a.dim();
#ifdef MATFUNC_HAVE_EIGEN
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXcd d(n);
  for (std::size_t k = 0; k < n; ++k) d(k) = f(es.eigenvalues()(k));
  const Eigen::MatrixXcd r = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
  DenseMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = r(i, j);
  return out;
#else
  return matfunc::apply_function(a, [&](double x) { return cplx(f(x)); });
#endif
}

/// Random Hermitian matrix with at most `s` non-zeros per row, entries of
/// modulus <= 1, optionally rescaled to induced 1-norm `one_norm`.
inline std::vector<std::tuple<index_t, index_t, cplx>> random_hermitian_triplets(std::mt19937_64& rng, index_t n, int s,
                                                                               bool real = false) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<index_t> pick(0, n - 1);
  std::vector<std::vector<index_t>> row(n);
  std::vector<std::tuple<index_t, index_t, cplx>> t;
  const int pairs = std::max<int>(1, static_cast<int>(n) * (s - 1) / 2);
  for (int k = 0; k < pairs; ++k) {
    const index_t i = pick(rng), j = pick(rng);
    if (i == j || static_cast<int>(row[i].size()) >= s - 1 || static_cast<int>(row[j].size()) >= s - 1) continue;
    if (std::find(row[i].begin(), row[i].end(), j) != row[i].end()) continue;
    row[i].push_back(j);
    row[j].push_back(i);
    const cplx v(u(rng), real ? 0.0 : u(rng));
    t.emplace_back(i, j, v);
    t.emplace_back(j, i, std::conj(v));
  }
  for (index_t i = 0; i < n; ++i) t.emplace_back(i, i, cplx(u(rng), 0.0));
  return t;
}

inline double triplet_one_norm(index_t n, const std::vector<std::tuple<index_t, index_t, cplx>>& t) {
  std::vector<double> col(n, 0.0);
  for (const auto& [i, j, v] : t) col[j] += std::abs(v);
  return *std::max_element(col.begin(), col.end());
}

inline matfunc::SparseOracle random_sparse(std::mt19937_64& rng, index_t n, int s, double one_norm) {
  auto t = random_hermitian_triplets(rng, n, s);
  const double c = one_norm / triplet_one_norm(n, t);
  for (auto& e : t) std::get<2>(e) *= c;
  matfunc::MatrixMeta meta;
  meta.one_norm = one_norm;
  return matfunc::sparse_from_triplets(n, t, meta);
}

/// Random Hermitian Pauli operator with L distinct strings and real
/// coefficients summing in absolute value to `lambda`.
inline matfunc::PauliOperator random_pauli(std::mt19937_64& rng, int n, int L, double lambda) {
  std::uniform_int_distribution<std::uint64_t> bits(0, (std::uint64_t{1} << n) - 1);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<matfunc::PauliTerm> terms;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> seen;
  double total = 0.0;
  while (static_cast<int>(terms.size()) < L) {
    const auto x = bits(rng), z = bits(rng);
    if (std::find(seen.begin(), seen.end(), std::make_pair(x, z)) != seen.end()) continue;
    seen.emplace_back(x, z);
    const double c = u(rng);
    total += c;
    terms.push_back({sign(rng) ? c : -c, matfunc::PauliString(n, x, z)});
  }
  for (auto& t : terms) t.coef *= lambda / total;
  return matfunc::PauliOperator(n, std::move(terms));
}

/// Dense matrix of a gate, built from 2x2 factors and control projectors.
inline DenseMatrix gate_matrix(const matfunc::Gate& g, int r) {
  auto factor = [&](int q, const DenseMatrix& m) {
    DenseMatrix out = DenseMatrix::identity(1);
    for (int k = 0; k < r; ++k) out = naive_kron(out, k == q ? m : DenseMatrix::identity(2));
    return out;
  };
  auto proj = [](int bit) {
    DenseMatrix p(2);
    p(bit, bit) = 1.0;
    return p;
  };
  auto on_qubits = [&](const std::vector<std::pair<int, DenseMatrix>>& f) {
    DenseMatrix out = DenseMatrix::identity(1);
    for (int k = 0; k < r; ++k) {
      DenseMatrix m = DenseMatrix::identity(2);
      for (const auto& [q, x] : f)
        if (q == k) m = x;
      out = naive_kron(out, m);
    }
    return out;
  };
  using K = matfunc::Gate::Kind;
  switch (g.kind) {
    case K::H: {
      DenseMatrix h(2);
      const double s = 1.0 / std::sqrt(2.0);
      h(0, 0) = s; h(0, 1) = s; h(1, 0) = s; h(1, 1) = -s;
      return factor(g.a, h);
    }
    case K::X:
      return factor(g.a, pauli_2x2('X'));
    case K::CNOT:
      return on_qubits({{g.a, proj(0)}}) + on_qubits({{g.a, proj(1)}, {g.b, pauli_2x2('X')}});
    case K::Toffoli:
      return DenseMatrix::identity(std::size_t{1} << r) - on_qubits({{g.a, proj(1)}, {g.b, proj(1)}}) +
             on_qubits({{g.a, proj(1)}, {g.b, proj(1)}, {g.c, pauli_2x2('X')}});
  }
  throw std::logic_error("gate");
}

inline DenseMatrix circuit_matrix(const matfunc::Circuit& c) {
  DenseMatrix u = DenseMatrix::identity(std::size_t{1} << c.r);
  for (const auto& g : c.gates) u = naive_mul(gate_matrix(g, c.r), u);
  return u;
}

/// Random circuit over the given gate kinds.
inline matfunc::Circuit random_circuit(std::mt19937_64& rng, int r, int T, bool with_cnot = true) {
  matfunc::Circuit c;
  c.r = r;
  std::uniform_int_distribution<int> q(0, r - 1);
  std::uniform_int_distribution<int> kind(0, 3);
  while (c.T() < T) {
    const int k = kind(rng);
    const int a = q(rng), b = q(rng), d = q(rng);
    if (k == 0) c.gates.push_back(matfunc::Gate::h(a));
    else if (k == 1 && with_cnot && a != b) c.gates.push_back(matfunc::Gate::cnot(a, b));
    else if (k == 2 && r >= 3 && a != b && b != d && a != d) c.gates.push_back(matfunc::Gate::toffoli(a, b, d));
    else if (k == 3) c.gates.push_back(matfunc::Gate::x(a));
  }
  return c;
}

}  // namespace oracle

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
#include <bit>
#include <cmath>
#include <compare>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "matfunc/core.hpp"
#include "matfunc/dense.hpp"
#include "matfunc/gate.hpp"

namespace matfunc {

/// A Hermitian Pauli word on n qubits, stored as X and Z bit masks.
///
/// Qubit q owns bit (n-1-q) of both masks, so qubit 0 is the most
/// significant bit of a basis index. A qubit with both bits set is Y.
/// Strings carry no phase; products return their phase separately.
class PauliString {
 public:
  static constexpr int kMaxQubits = 63;

  PauliString() = default;
  PauliString(int n, std::uint64_t x, std::uint64_t z) : n_(n), x_(x), z_(z) {
    if (n < 0 || n > kMaxQubits) throw PreconditionError("qubit count out of range");
    const std::uint64_t hi = n == 0 ? ~0ULL : ~((~0ULL) >> (64 - n));
    if ((x & hi) || (z & hi)) throw PreconditionError("Pauli mask has bits beyond n_qubits");
  }

  static PauliString identity(int n) { return PauliString(n, 0, 0); }

  static std::uint64_t qubit_bit(int n, int q) { return 1ULL << (n - 1 - q); }

  /// Single-qubit Pauli `p` in {'I','X','Y','Z'} on qubit q.
  static PauliString single(int n, int q, char p) {
    const std::uint64_t b = qubit_bit(n, q);
    switch (p) {
      case 'I': return PauliString(n, 0, 0);
      case 'X': return PauliString(n, b, 0);
      case 'Y': return PauliString(n, b, b);
      case 'Z': return PauliString(n, 0, b);
      default: throw PreconditionError(std::string("unknown Pauli letter ") + p);
    }
  }

  /// Parses a word such as "XIZY"; the leftmost letter is qubit 0.
  static PauliString from_word(std::string_view w) {
    const int n = static_cast<int>(w.size());
    std::uint64_t x = 0, z = 0;
    for (int q = 0; q < n; ++q) {
      const std::uint64_t b = n == 0 ? 0 : qubit_bit(n, q);
      switch (w[q]) {
        case 'I': case '_': break;
        case 'X': x |= b; break;
        case 'Y': x |= b; z |= b; break;
        case 'Z': z |= b; break;
        default: throw PreconditionError("bad Pauli word: " + std::string(w));
      }
    }
    return PauliString(n, x, z);
  }

  std::string word() const {
    std::string s(n_, 'I');
    for (int q = 0; q < n_; ++q) {
      const std::uint64_t b = qubit_bit(n_, q);
      const bool xb = x_ & b, zb = z_ & b;
      s[q] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    return s;
  }

  int n_qubits() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  bool is_identity() const { return x_ == 0 && z_ == 0; }
  int weight() const { return std::popcount(x_ | z_); }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  /// Canonical order: lexicographic on (z_bits, x_bits).
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.z_ <=> b.z_; c != 0) return c;
    return a.x_ <=> b.x_;
  }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const {
    return static_cast<std::size_t>(p.x_bits() * 0x9e3779b97f4a7c15ULL ^ (p.z_bits() + 0x632be59bd9b4e019ULL));
  }
};

inline cplx i_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Exponent k with p*q = i^k r.
///
/// With P(x,z) = i^{|x&z|} X^x Z^z the exponent is
/// |x1&z1| + |x2&z2| + 2|z1&x2| - |x3&z3| (mod 4).
inline int multiply_exponent(const PauliString& p, const PauliString& q) {
  const std::uint64_t x3 = p.x_bits() ^ q.x_bits(), z3 = p.z_bits() ^ q.z_bits();
  const int k = std::popcount(p.x_bits() & p.z_bits()) + std::popcount(q.x_bits() & q.z_bits()) +
                2 * std::popcount(p.z_bits() & q.x_bits()) - std::popcount(x3 & z3);
  return ((k % 4) + 4) % 4;
}

/// Product of two strings as (phase, string).
inline std::pair<cplx, PauliString> multiply(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) throw PreconditionError("Pauli dimension mismatch");
  return {i_pow(multiply_exponent(p, q)),
          PauliString(p.n_qubits(), p.x_bits() ^ q.x_bits(), p.z_bits() ^ q.z_bits())};
}

inline bool commutes(const PauliString& p, const PauliString& q) {
  return ((std::popcount(p.x_bits() & q.z_bits()) + std::popcount(p.z_bits() & q.x_bits())) & 1) == 0;
}

/// <i|P|j>, nonzero only when i = j ^ x.
inline cplx string_entry_unchecked(const PauliString& p, index_t i, index_t j) {
  if (i != (j ^ p.x_bits())) return 0.0;
  const int k = std::popcount(p.x_bits() & p.z_bits()) + 2 * std::popcount(p.z_bits() & j);
  return i_pow(k);
}

inline cplx string_entry(const PauliString& p, index_t i, index_t j) {
  const index_t dim = index_t{1} << p.n_qubits();
  if (i >= dim || j >= dim) throw PreconditionError("basis index out of range");
  return string_entry_unchecked(p, i, j);
}

struct PauliTerm {
  cplx coef;
  PauliString string;
};

/// Sparse complex combination of Pauli strings in canonical form.
class PauliOperator {
 public:
  static constexpr double kDropTolerance = 1e-14;

  PauliOperator() = default;
  explicit PauliOperator(int n) : n_(n) {}
  PauliOperator(int n, std::vector<PauliTerm> terms) : n_(n), terms_(std::move(terms)) { canonicalize(); }

  static PauliOperator identity(int n, cplx c = 1.0) {
    return PauliOperator(n, {PauliTerm{c, PauliString::identity(n)}});
  }
  static PauliOperator single(int n, int q, char p, cplx c = 1.0) {
    return PauliOperator(n, {PauliTerm{c, PauliString::single(n, q, p)}});
  }

  int n_qubits() const { return n_; }
  index_t dim() const { return index_t{1} << n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  double pauli_norm() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coef);
    return s;
  }

  /// Hermitian iff every coefficient is real, since every string is.
  bool is_hermitian(double tol = 1e-12) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const PauliTerm& t) { return std::abs(t.coef.imag()) <= tol; });
  }

  PauliOperator adjoint() const {
    PauliOperator r = *this;
    for (auto& t : r.terms_) t.coef = std::conj(t.coef);
    return r;
  }

  cplx entry(index_t i, index_t j) const {
    cplx s = 0.0;
    for (const auto& t : terms_) s += t.coef * string_entry(t.string, i, j);
    return s;
  }

  cplx coefficient(const PauliString& p) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                               [](const PauliTerm& t, const PauliString& s) { return t.string < s; });
    return (it != terms_.end() && it->string == p) ? it->coef : cplx(0.0);
  }

  friend bool operator==(const PauliOperator& a, const PauliOperator& b) {
    if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
      if (a.terms_[k].string != b.terms_[k].string || a.terms_[k].coef != b.terms_[k].coef) return false;
    return true;
  }

  friend PauliOperator operator+(const PauliOperator& a, const PauliOperator& b) {
    check_same(a, b);
    std::vector<PauliTerm> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return PauliOperator(a.n_, std::move(t));
  }
  friend PauliOperator operator-(const PauliOperator& a, const PauliOperator& b) { return a + (-1.0) * b; }
  friend PauliOperator operator*(cplx c, PauliOperator a) {
    for (auto& t : a.terms_) t.coef *= c;
    a.canonicalize();
    return a;
  }

  /// Operator product, expanded term by term.
  friend PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
    check_same(a, b);
    std::unordered_map<PauliString, cplx, PauliStringHash> acc;
    acc.reserve(a.size() * b.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) {
        const int k = multiply_exponent(s.string, t.string);
        PauliString r(a.n_, s.string.x_bits() ^ t.string.x_bits(), s.string.z_bits() ^ t.string.z_bits());
        acc[r] += i_pow(k) * s.coef * t.coef;
      }
    if (acc.size() > caps().closure_terms) throw CapExceeded("Pauli product exceeds term cap");
    std::vector<PauliTerm> out;
    out.reserve(acc.size());
    for (auto& [s, c] : acc) out.push_back({c, s});
    return PauliOperator(a.n_, std::move(out));
  }

 private:
  static void check_same(const PauliOperator& a, const PauliOperator& b) {
    if (a.n_ != b.n_) throw PreconditionError("Pauli dimension mismatch");
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
    std::vector<PauliTerm> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (t.string.n_qubits() != n_) throw PreconditionError("term qubit count differs from operator");
      if (!merged.empty() && merged.back().string == t.string)
        merged.back().coef += t.coef;
      else
        merged.push_back(t);
    }
    double lambda = 0.0;
    for (const auto& t : merged) lambda += std::abs(t.coef);
    const double drop = kDropTolerance * lambda;
    terms_.clear();
    for (const auto& t : merged)
      if (std::abs(t.coef) >= drop && t.coef != 0.0) terms_.push_back(t);
  }

  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Kronecker product; the qubits of `a` come first.
inline PauliOperator tensor(const PauliOperator& a, const PauliOperator& b) {
  const int n = a.n_qubits() + b.n_qubits();
  if (n > PauliString::kMaxQubits) throw CapExceeded("tensor product exceeds 63 qubits");
  const int nb = b.n_qubits();
  std::vector<PauliTerm> out;
  out.reserve(a.size() * b.size());
  for (const auto& s : a.terms())
    for (const auto& t : b.terms())
      out.push_back({s.coef * t.coef,
                     PauliString(n, (s.string.x_bits() << nb) | t.string.x_bits(),
                                 (s.string.z_bits() << nb) | t.string.z_bits())});
  return PauliOperator(n, std::move(out));
}

inline DenseMatrix to_dense(const PauliOperator& a) {
  if (a.n_qubits() > caps().pauli_dense_qubits)
    throw CapExceeded("to_dense: " + std::to_string(a.n_qubits()) + " qubits exceeds cap");
  const index_t dim = a.dim();
  DenseMatrix m(dim);
  for (const auto& t : a.terms())
    for (index_t j = 0; j < dim; ++j) {
      const index_t i = j ^ t.string.x_bits();
      m(i, j) += t.coef * string_entry_unchecked(t.string, i, j);
    }
  return m;
}

/// |i><j| on n qubits as 2^n terms of magnitude 2^-n.
inline PauliOperator decompose_projector(index_t i, index_t j, int n) {
  if (n < 1 || n > PauliString::kMaxQubits) throw PreconditionError("qubit count out of range");
  const index_t dim = index_t{1} << n;
  if (i >= dim || j >= dim) throw PreconditionError("basis index out of range");
  static const cplx kI(0.0, 1.0);
  PauliOperator r = PauliOperator::identity(0);
  for (int q = 0; q < n; ++q) {
    const index_t bit = index_t{1} << (n - 1 - q);
    const bool a = i & bit, b = j & bit;
    PauliOperator f;
    if (!a && !b)
      f = PauliOperator(1, {{0.5, PauliString::from_word("I")}, {0.5, PauliString::from_word("Z")}});
    else if (a && b)
      f = PauliOperator(1, {{0.5, PauliString::from_word("I")}, {-0.5, PauliString::from_word("Z")}});
    else if (!a && b)
      f = PauliOperator(1, {{0.5, PauliString::from_word("X")}, {0.5 * kI, PauliString::from_word("Y")}});
    else
      f = PauliOperator(1, {{0.5, PauliString::from_word("X")}, {-0.5 * kI, PauliString::from_word("Y")}});
    r = tensor(r, f);
  }
  return r;
}

/// A gate embedded on n qubits.
inline PauliOperator decompose_gate(const Gate& g, int n) {
  g.validate(n);
  const auto id = PauliOperator::identity(n);
  switch (g.kind) {
    case Gate::Kind::H: {
      const double s = 1.0 / std::sqrt(2.0);
      return PauliOperator::single(n, g.a, 'X', s) + PauliOperator::single(n, g.a, 'Z', s);
    }
    case Gate::Kind::X:
      return PauliOperator::single(n, g.a, 'X');
    case Gate::Kind::CNOT: {
      // |0><0| (x) 1 + |1><1| (x) X
      const auto zc = PauliOperator::single(n, g.a, 'Z');
      const auto xt = PauliOperator::single(n, g.b, 'X');
      return 0.5 * (id + zc + xt - zc * xt);
    }
    case Gate::Kind::Toffoli: {
      // 1 - |11><11| (x) (1 - X)
      const auto p0 = 0.5 * (id - PauliOperator::single(n, g.a, 'Z'));
      const auto p1 = 0.5 * (id - PauliOperator::single(n, g.b, 'Z'));
      return id - p0 * p1 * (id - PauliOperator::single(n, g.c, 'X'));
    }
  }
  throw PreconditionError("unknown gate");
}

/// Phase-stripped group generated by `generators`, sorted canonically.
///
/// The result has at most 2^L elements for L generators; counting the
/// signs +-1 that products may carry gives the looser 2^{L+1}.
inline std::vector<PauliString> subgroup_closure(const std::vector<PauliString>& generators, int n = -1) {
  if (generators.empty()) {
    if (n < 0) throw PreconditionError("empty generator list needs an explicit qubit count");
    return {PauliString::identity(n)};
  }
  const int nq = generators.front().n_qubits();
  for (const auto& g : generators)
    if (g.n_qubits() != nq) throw PreconditionError("Pauli dimension mismatch");
  std::unordered_set<PauliString, PauliStringHash> seen{PauliString::identity(nq)};
  std::vector<PauliString> frontier{PauliString::identity(nq)};
  while (!frontier.empty()) {
    std::vector<PauliString> next;
    for (const auto& p : frontier)
      for (const auto& g : generators) {
        PauliString r(nq, p.x_bits() ^ g.x_bits(), p.z_bits() ^ g.z_bits());
        if (seen.insert(r).second) {
          if (seen.size() > caps().closure_terms) throw CapExceeded("subgroup closure exceeds term cap");
          next.push_back(r);
        }
      }
    frontier.swap(next);
  }
  std::vector<PauliString> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace matfunc

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
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "matfunc/access.hpp"
#include "matfunc/core.hpp"
#include "matfunc/estimate.hpp"
#include "matfunc/pauli.hpp"
#include "matfunc/polynomial.hpp"
#include "matfunc/random.hpp"

namespace matfunc {

namespace detail {

// A restricted to the indices S that carry any listed entry. Outside S the
// matrix is zero, so p(A) = p(A_S) on S and p(0) times the identity elsewhere.
struct CompressedBlock {
  std::vector<index_t> support;
  std::size_t n = 0;
  std::vector<cplx> a;  // row-major n x n

  explicit CompressedBlock(const SuperSparseMatrix& m) {
    for (const auto& e : m.entries()) {
      support.push_back(e.i);
      support.push_back(e.j);
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    n = support.size();
    if (static_cast<double>(m.k()) * static_cast<double>(m.k()) > static_cast<double>(caps().supersparse_k2))
      throw CapExceeded("super-sparse: k^2 exceeds work cap");
    a.assign(n * n, 0.0);
    for (const auto& e : m.entries()) a[pos(e.i) * n + pos(e.j)] = e.v;
  }

  std::ptrdiff_t find(index_t i) const {
    auto it = std::lower_bound(support.begin(), support.end(), i);
    return (it != support.end() && *it == i) ? it - support.begin() : -1;
  }
  std::size_t pos(index_t i) const { return static_cast<std::size_t>(find(i)); }

  std::vector<cplx> apply(const std::vector<cplx>& v) const {
    std::vector<cplx> out(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      cplx s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += a[r * n + c] * v[c];
      out[r] = s;
    }
    return out;
  }

  /// p(A_S) e_col as a length-n vector.
  std::vector<cplx> poly_column(const PolynomialSpec& p, std::size_t col) const {
    std::vector<cplx> e(n, 0.0), out(n, 0.0);
    e[col] = 1.0;
    auto axpy = [&](cplx c, const std::vector<cplx>& v) {
      if (c == 0.0) return;
      for (std::size_t k = 0; k < n; ++k) out[k] += c * v[k];
    };
    if (p.has_chebyshev()) {
      const auto& c = p.chebyshev;
      std::vector<cplx> v0 = e;
      axpy(c[0], v0);
      if (c.size() == 1) return out;
      std::vector<cplx> v1 = apply(v0);
      axpy(c[1], v1);
      for (std::size_t k = 2; k < c.size(); ++k) {
        std::vector<cplx> v2 = apply(v1);
        for (std::size_t q = 0; q < n; ++q) v2[q] = 2.0 * v2[q] - v0[q];
        axpy(c[k], v2);
        v0 = std::move(v1);
        v1 = std::move(v2);
      }
      return out;
    }
    std::vector<cplx> v = e;
    axpy(p.coefficients[0], v);
    for (int d = 1; d <= p.degree(); ++d) {
      v = apply(v);
      axpy(p.coefficients[d], v);
    }
    return out;
  }
};

inline cplx poly_at_zero(const PolynomialSpec& p) { return eval_scalar(p, 0.0); }

}  // namespace detail

/// Exact <i|p(A)|j> over the closed set of listed indices.
inline cplx supersparse_entry(const SuperSparseMatrix& m, const PolynomialSpec& p, index_t i, index_t j) {
  if (i >= m.dim() || j >= m.dim()) throw PreconditionError("index out of range");
  const detail::CompressedBlock blk(m);
  const auto pi = blk.find(i), pj = blk.find(j);
  if (pi < 0 || pj < 0) return i == j ? detail::poly_at_zero(p) : cplx(0.0);
  return blk.poly_column(p, static_cast<std::size_t>(pj))[static_cast<std::size_t>(pi)];
}

/// Exact numerator and denominator of the normalized LM.
inline LmParts supersparse_lm_parts(const SuperSparseMatrix& m, const PolynomialSpec& p, index_t i) {
  if (i >= m.dim()) throw PreconditionError("index out of range");
  const detail::CompressedBlock blk(m);
  LmParts r;
  const auto pi = blk.find(i);
  if (pi < 0) {
    r.den = std::norm(detail::poly_at_zero(p));
    r.num = in_pi(i, m.dim()) ? r.den : 0.0;
    return r;
  }
  const auto col = blk.poly_column(p, static_cast<std::size_t>(pi));
  for (std::size_t k = 0; k < blk.n; ++k) {
    r.den += std::norm(col[k]);
    if (in_pi(blk.support[k], m.dim())) r.num += std::norm(col[k]);
  }
  return r;
}

/// Exact <i|p(A)^dag pi p(A)|i>; with `normalize` divided by ||p(A)|i>||^2.
inline double supersparse_lm(const SuperSparseMatrix& m, const PolynomialSpec& p, index_t i, bool normalize = false) {
  const LmParts r = supersparse_lm_parts(m, p, i);
  return normalize ? r.normalized() : r.num;
}

/// Explicit Pauli form of p(A) from iterated products A * A^k, all of which
/// stay inside the subgroup generated by the strings of A.
inline PauliOperator pauli_supersparse_apply(const PauliAccess& pa, const PolynomialSpec& p) {
  const PauliOperator& A = pa.op();
  const int n = A.n_qubits();
  PauliOperator out = PauliOperator::identity(n, 0.0);
  auto add = [&](cplx c, const PauliOperator& x) {
    if (c != 0.0) out = out + c * x;
  };
  if (p.has_chebyshev()) {
    const auto& c = p.chebyshev;
    PauliOperator t0 = PauliOperator::identity(n);
    add(c[0], t0);
    if (c.size() == 1) return out;
    PauliOperator t1 = A;
    add(c[1], t1);
    for (std::size_t k = 2; k < c.size(); ++k) {
      PauliOperator t2 = 2.0 * (A * t1) - t0;
      add(c[k], t2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    return out;
  }
  PauliOperator pw = PauliOperator::identity(n);
  add(p.coefficients[0], pw);
  for (int d = 1; d <= p.degree(); ++d) {
    pw = A * pw;
    add(p.coefficients[d], pw);
  }
  return out;
}

inline cplx pauli_supersparse_entry(const PauliOperator& fa, index_t i, index_t j) { return fa.entry(i, j); }

inline cplx pauli_supersparse_entry(const PauliAccess& pa, const PolynomialSpec& p, index_t i, index_t j) {
  return pauli_supersparse_entry(pauli_supersparse_apply(pa, p), i, j);
}

/// sum_{a,b} conj(c_a) c_b <i|P_a^dag pi P_b|i>. A pair contributes only when
/// both strings share their X part, so terms are grouped by X part first.
inline LmParts pauli_supersparse_lm_parts(const PauliOperator& fa, index_t i) {
  if (i >= fa.dim()) throw PreconditionError("index out of range");
  std::unordered_map<std::uint64_t, cplx> amp;  // keyed by X part; endpoint i ^ x
  for (const auto& t : fa.terms()) {
    const index_t k = i ^ t.string.x_bits();
    amp[t.string.x_bits()] += t.coef * string_entry_unchecked(t.string, k, i);
  }
  LmParts r;
  for (const auto& [x, v] : amp) {
    r.den += std::norm(v);
    if (in_pi(i ^ x, fa.dim())) r.num += std::norm(v);
  }
  return r;
}

inline double pauli_supersparse_lm(const PauliOperator& fa, index_t i, bool normalize = false) {
  const LmParts r = pauli_supersparse_lm_parts(fa, i);
  return normalize ? r.normalized() : r.num;
}

inline double pauli_supersparse_lm(const PauliAccess& pa, const PolynomialSpec& p, index_t i, bool normalize = false) {
  return pauli_supersparse_lm(pauli_supersparse_apply(pa, p), i, normalize);
}

/// Number of draws for an eps'-accurate sketch: ceil(8 lambda^2/eps'^2 ln(2N/delta)).
inline std::uint64_t sketch_size(double lambda, double eps_prime, double delta, index_t dim) {
  const double m = std::ceil(8.0 * lambda * lambda / (eps_prime * eps_prime) *
                             std::log(2.0 * static_cast<double>(dim) / delta));
  if (!std::isfinite(m) || m > static_cast<double>(caps().max_samples))
    throw CapExceeded("sketch size exceeds sample cap");
  return static_cast<std::uint64_t>(std::max(1.0, m));
}

/// Average of m draws X = (a_l/|a_l|) lambda P_l, with P_l drawn with
/// probability |a_l|/lambda. Unbiased for A.
inline PauliAccess sketch_pauli(const PauliAccess& pa, std::uint64_t m, RandomStream& rng) {
  if (pa.lambda() <= 0) throw PreconditionError("sketch_pauli: zero operator");
  std::vector<std::uint64_t> counts(pa.op().size(), 0);
  for (std::uint64_t s = 0; s < m; ++s) ++counts[pa.sample_term(rng).first];
  std::vector<PauliTerm> terms;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    const auto& t = pa.op().terms()[k];
    terms.push_back({t.coef / std::abs(t.coef) * pa.lambda() * (static_cast<double>(counts[k]) / m), t.string});
  }
  return PauliAccess(PauliOperator(pa.n_qubits(), std::move(terms)), pa.meta());
}

inline PauliAccess sketch_pauli(const PauliAccess& pa, double eps_prime, double delta, RandomStream& rng) {
  return sketch_pauli(pa, sketch_size(pa.lambda(), eps_prime, delta, pa.dim()), rng);
}

/// sum_k k |alpha_k| rho^{k-1}: bounds ||p(A') - p(A)|| / ||A' - A|| whenever
/// both norms are at most rho.
inline double coefficient_lipschitz(const PolynomialSpec& p, double rho) {
  double s = 0.0, pw = 1.0;
  for (int k = 1; k <= p.degree(); ++k) {
    s += k * std::abs(p.coefficients[k]) * pw;
    pw *= rho;
  }
  return s;
}

/// First-order ratio num/den with half-widths propagated; refuses when the
/// denominator interval reaches zero.
inline Estimate ratio_estimate(const Estimate& num, const Estimate& den) {
  const double d = den.value.real();
  if (d - den.half_width <= 0.0)
    throw PreconditionError("normalized LM: denominator estimate minus its half-width is not positive");
  Estimate e;
  const double r = num.value.real() / d;
  e.value = r;
  e.half_width = (num.half_width + std::abs(r) * den.half_width) / (d - den.half_width);
  e.samples = num.samples + den.samples;
  e.algorithm = num.algorithm;
  return e;
}

/// Sketch the Pauli coefficients, then evaluate p on the sketch exactly.
///
/// The sketch error eps' is chosen so that the Lipschitz bound of p turns
/// it into at most eps on the target. LM error is at most e (2P + e) with
/// e = L eps' and P = sum |alpha_k|; the normalized form spends eps/2 on
/// each part of the ratio.
inline Estimate sketch_then_eval(const PauliAccess& pa, const PolynomialSpec& p, const Target& target, double eps,
                                 double delta, std::uint64_t seed) {
  Stopwatch sw;
  if (!pa.meta().eta) throw PreconditionError("sketch: declared spectral gap eta required");
  const double eta = *pa.meta().eta;
  if (pa.lambda() > 1.0 - eta + 1e-15) throw PreconditionError("sketch: declared lambda_A exceeds 1 - eta");
  const double lip = coefficient_lipschitz(p, 1.0);
  const double P = l1_rescaled_norm(p, 1.0);
  const double part = target.kind == Target::Kind::NLM ? eps / 2 : eps;
  const double e_op = target.kind == Target::Kind::Entry ? part : -P + std::sqrt(P * P + part);
  // A smaller eps' only costs samples, so keep it under eta: the sketch
  // then stays inside the unit ball where the Lipschitz bound applies.
  const double eps_prime = lip > 0 ? std::min(e_op / lip, eta / 2) : eta / 2;
  const std::uint64_t m = sketch_size(pa.lambda(), eps_prime, delta, pa.dim());
  RandomStream rng(seed);
  const PauliAccess sk = sketch_pauli(pa, m, rng);
  const PauliOperator fa = pauli_supersparse_apply(sk, p);
  Estimate e;
  if (target.kind == Target::Kind::Entry) {
    e.value = pauli_supersparse_entry(fa, target.i, target.j);
    e.half_width = eps;
  } else {
    const LmParts r = pauli_supersparse_lm_parts(fa, target.i);
    e.value = r.num;
    e.half_width = part;
    if (target.kind == Target::Kind::NLM) {
      Estimate den;
      den.value = r.den;
      den.half_width = part;
      e = ratio_estimate(e, den);
    }
  }
  e.algorithm = "sketch";
  e.samples = m;
  e.wall_time = sw.seconds();
  return e;
}

}  // namespace matfunc

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

#include <cmath>
#include <map>
#include <string>

#include "matfunc/access.hpp"
#include "matfunc/core.hpp"
#include "matfunc/estimate.hpp"
#include "matfunc/polynomial.hpp"

namespace matfunc {

namespace detail {

inline void check_path_work(int s, int m) {
  if (m > 0 && s > 1 && m * std::log(static_cast<double>(s)) > std::log(caps().path_work))
    throw CapExceeded("exact path: s^m = " + std::to_string(s) + "^" + std::to_string(m) + " exceeds work cap");
}

inline cplx entry_path_rec(const SparseOracle& o, index_t i, index_t j, int m) {
  if (m == 0) return i == j ? cplx(1.0) : cplx(0.0);
  cplx s = 0.0;
  for (const auto& [k, a] : row_entries(o, i)) s += a * entry_path_rec(o, k, j, m - 1);
  return s;
}

inline cplx lm_path_rec(const SparseOracle& o, index_t i, index_t j, int m1, int m2) {
  if (m2 > 0) {
    cplx s = 0.0;
    for (const auto& [k, a] : column_entries(o, j)) s += lm_path_rec(o, i, k, m1, m2 - 1) * a;
    return s;
  }
  if (m1 > 0) {
    cplx s = 0.0;
    for (const auto& [k, a] : row_entries(o, i)) s += a * lm_path_rec(o, k, j, m1 - 1, 0);
    return s;
  }
  return (i == j && in_pi(i, o.dim)) ? cplx(1.0) : cplx(0.0);
}

}  // namespace detail

/// [A^m]_ij by recursion over row neighbors, O(s^m).
inline cplx exact_entry_path(const SparseOracle& o, index_t i, index_t j, int m) {
  if (m < 0) throw PreconditionError("exact_entry_path: m must be >= 0");
  detail::check_path_work(o.sparsity, m);
  return detail::entry_path_rec(o, i, j, m);
}

/// <i|A^{m1} pi A^{m2}|j>, peeling A from the right, then from the left.
inline cplx exact_lm_path(const SparseOracle& o, index_t i, index_t j, int m1, int m2) {
  if (m1 < 0 || m2 < 0) throw PreconditionError("exact_lm_path: powers must be >= 0");
  detail::check_path_work(o.sparsity, m1 + m2);
  return detail::lm_path_rec(o, i, j, m1, m2);
}

using SparseVector = std::map<index_t, cplx>;

/// A v using column access.
inline SparseVector sparse_apply(const SparseOracle& o, const SparseVector& v) {
  SparseVector out;
  for (const auto& [c, x] : v) {
    if (x == 0.0) continue;
    for (const auto& [r, a] : column_entries(o, c)) out[r] += a * x;
  }
  return out;
}

/// p(A)|j> with every monomial <k|A^d|j> computed once. Uses the Chebyshev
/// recurrence when the spec carries Chebyshev coefficients.
inline SparseVector exact_apply_poly(const SparseOracle& o, const PolynomialSpec& p, index_t j) {
  const int d = p.degree();
  double work = 0.0;
  auto account = [&](const SparseVector& v) {
    work += static_cast<double>(v.size()) * std::max(1, o.sparsity);
    if (work > caps().path_work) throw CapExceeded("exact polynomial evaluation exceeds work cap");
  };
  SparseVector out;
  auto axpy = [&](cplx a, const SparseVector& v) {
    if (a == 0.0) return;
    for (const auto& [k, x] : v) out[k] += a * x;
  };
  SparseVector v0{{j, 1.0}};
  if (p.has_chebyshev()) {
    const auto& c = p.chebyshev;
    axpy(c[0], v0);
    if (c.size() == 1) return out;
    SparseVector v1 = sparse_apply(o, v0);
    account(v1);
    axpy(c[1], v1);
    for (std::size_t k = 2; k < c.size(); ++k) {
      SparseVector v2 = sparse_apply(o, v1);
      account(v2);
      for (auto& [key, x] : v2) x *= 2.0;
      for (const auto& [key, x] : v0) v2[key] -= x;
      axpy(c[k], v2);
      v0 = std::move(v1);
      v1 = std::move(v2);
    }
    return out;
  }
  SparseVector v = v0;
  axpy(p.coefficients[0], v);
  for (int k = 1; k <= d; ++k) {
    v = sparse_apply(o, v);
    account(v);
    axpy(p.coefficients[k], v);
  }
  return out;
}

/// sum_k alpha_k [A^k]_ij, exact.
inline cplx exact_entry_poly(const SparseOracle& o, const PolynomialSpec& p, index_t i, index_t j) {
  const auto v = exact_apply_poly(o, p, j);
  auto it = v.find(i);
  return it == v.end() ? cplx(0.0) : it->second;
}

/// Numerator and denominator of the normalized LM, exact.
inline LmParts exact_lm_parts(const SparseOracle& o, const PolynomialSpec& p, index_t i) {
  LmParts r;
  for (const auto& [k, x] : exact_apply_poly(o, p, i)) {
    r.den += std::norm(x);
    if (in_pi(k, o.dim)) r.num += std::norm(x);
  }
  return r;
}

/// <i|p(A)^dag pi p(A)|i>; with `normalize` divides by ||p(A)|i>||^2.
inline double exact_lm_poly(const SparseOracle& o, const PolynomialSpec& p, index_t i, bool normalize = false) {
  const LmParts r = exact_lm_parts(o, p, i);
  return normalize ? r.normalized() : r.num;
}

}  // namespace matfunc

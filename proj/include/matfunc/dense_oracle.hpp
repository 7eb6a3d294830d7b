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
#include <numeric>
#include <type_traits>
#include <vector>

#include "matfunc/core.hpp"
#include "matfunc/dense.hpp"
#include "matfunc/pauli.hpp"

namespace matfunc {

using ScalarFunction = std::function<cplx(double)>;

/// Eigenvalues ascending; column k of `vectors` belongs to values[k].
struct EigenDecomposition {
  std::vector<double> values;
  DenseMatrix vectors;
};

namespace detail {

inline double conj_if(double v) { return v; }
inline cplx conj_if(const cplx& v) { return std::conj(v); }
inline double unit_phase(double v) { return v < 0 ? -1.0 : 1.0; }
inline cplx unit_phase(const cplx& v) { return v / std::abs(v); }

// Cyclic Jacobi on a Hermitian matrix held row-major in `a`.
// Each rotation is J = E R with E = diag(1, conj(phase)) making a_pq real.
template <class S>
void jacobi_sweeps(std::size_t n, std::vector<S>& a, std::vector<S>& v) {
  auto A = [&](std::size_t i, std::size_t j) -> S& { return a[i * n + j]; };
  auto V = [&](std::size_t i, std::size_t j) -> S& { return v[i * n + j]; };
  double fro = 0.0;
  for (const auto& z : a) fro += std::norm(z);
  fro = std::sqrt(fro);
  const double target = 1e-12 * fro;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * std::norm(A(p, q));
    if (std::sqrt(off) <= target) return;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const S apq = A(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = std::real(A(p, p)), aqq = std::real(A(q, q));
        if (sweep > 3 && mag < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          A(p, q) = S(0);
          A(q, p) = S(0);
          continue;
        }
        const S ph = unit_phase(apq);
        const S phc = conj_if(ph);
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // columns: X = A J
        for (std::size_t k = 0; k < n; ++k) {
          const S akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * phc * akq;
          A(k, q) = s * akp + c * phc * akq;
        }
        // rows: A = J^dagger X
        for (std::size_t k = 0; k < n; ++k) {
          const S xpk = A(p, k), xqk = A(q, k);
          A(p, k) = c * xpk - s * ph * xqk;
          A(q, k) = s * xpk + c * ph * xqk;
        }
        A(p, q) = S(0);
        A(q, p) = S(0);
        A(p, p) = S(std::real(A(p, p)));
        A(q, q) = S(std::real(A(q, q)));
        for (std::size_t k = 0; k < n; ++k) {
          const S vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * phc * vkq;
          V(k, q) = s * vkp + c * phc * vkq;
        }
      }
  }
  throw Error("Jacobi eigensolver did not converge in 100 sweeps");
}

}  // namespace detail

/// Full Hermitian eigendecomposition by cyclic Jacobi rotations.
/// Real symmetric input takes a real-arithmetic path.
inline EigenDecomposition eig_hermitian(const DenseMatrix& d) {
  const std::size_t n = d.dim();
  if (!d.is_hermitian(1e-12 * std::max(1.0, d.frobenius_norm())))
    throw PreconditionError("eig_hermitian: matrix is not Hermitian");
  std::vector<double> diag(n);
  EigenDecomposition out{{}, DenseMatrix(n)};
  if (d.is_real()) {
    std::vector<double> a(n * n), v(n * n, 0.0);
    for (std::size_t k = 0; k < n * n; ++k) a[k] = d.data()[k].real();
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    detail::jacobi_sweeps(n, a, v);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
    for (std::size_t k = 0; k < n * n; ++k) out.vectors(k / n, k % n) = v[k];
  } else {
    std::vector<cplx> a(d.data()), v(n * n, cplx(0.0));
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    detail::jacobi_sweeps(n, a, v);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i].real();
    for (std::size_t k = 0; k < n * n; ++k) out.vectors(k / n, k % n) = v[k];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });
  DenseMatrix sorted(n);
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) sorted(i, k) = out.vectors(i, order[k]);
  }
  out.vectors = std::move(sorted);
  return out;
}

/// S f(Lambda) S^dagger.
inline DenseMatrix apply_function(const EigenDecomposition& e, const ScalarFunction& f) {
  const std::size_t n = e.values.size();
  std::vector<cplx> fv(n);
  for (std::size_t k = 0; k < n; ++k) {
    fv[k] = f(e.values[k]);
    if (!std::isfinite(fv[k].real()) || !std::isfinite(fv[k].imag()))
      throw PreconditionError("function undefined at eigenvalue " + std::to_string(e.values[k]));
  }
  DenseMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx sik = e.vectors(i, k) * fv[k];
      if (sik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += sik * std::conj(e.vectors(j, k));
    }
  return r;
}

inline DenseMatrix apply_function(const DenseMatrix& d, const ScalarFunction& f) {
  return apply_function(eig_hermitian(d), f);
}

/// 1/x with the oracle's near-zero guard.
inline ScalarFunction guarded_inverse(double tol = 1e-12) {
  return [tol](double x) -> cplx {
    if (std::abs(x) < tol) return {std::nan(""), 0.0};
    return 1.0 / x;
  };
}

inline cplx exact_entry(const DenseMatrix& d, const ScalarFunction& f, std::size_t i, std::size_t j) {
  return apply_function(d, f)(i, j);
}

namespace detail {
// f(A)|i> as a column of the dense function.
inline std::vector<cplx> applied_column(const DenseMatrix& fa, std::size_t i) {
  std::vector<cplx> col(fa.dim());
  for (std::size_t k = 0; k < fa.dim(); ++k) col[k] = fa(k, i);
  return col;
}
}  // namespace detail

/// <i|f(A)^dagger pi f(A)|i> given f(A).
inline double lm_from_function(const DenseMatrix& fa, std::size_t i) {
  double s = 0.0;
  for (std::size_t k = 0; k < fa.dim(); ++k)
    if (in_pi(k, fa.dim())) s += std::norm(fa(k, i));
  return s;
}

inline double exact_lm(const DenseMatrix& d, const ScalarFunction& f, std::size_t i) {
  return lm_from_function(apply_function(d, f), i);
}

inline double normalized_lm_from_function(const DenseMatrix& fa, std::size_t i) {
  double total = 0.0;
  for (std::size_t k = 0; k < fa.dim(); ++k) total += std::norm(fa(k, i));
  if (total < 1e-12) throw PreconditionError("normalized LM: ||f(A)|i>||^2 below 1e-12");
  return lm_from_function(fa, i) / total;
}

inline double exact_normalized_lm(const DenseMatrix& d, const ScalarFunction& f, std::size_t i) {
  return normalized_lm_from_function(apply_function(d, f), i);
}

/// Solves d x = b by Gaussian elimination with partial pivoting.
inline std::vector<cplx> dense_solve(const DenseMatrix& d, std::vector<cplx> b) {
  const std::size_t n = d.dim();
  std::vector<cplx> a(d.data());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-300) throw PreconditionError("dense_solve: singular matrix");
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(b[col], b[piv]);
    }
    const cplx inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t r = n; r-- > 0;) {
    cplx s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
    x[r] = s / a[r * n + r];
  }
  return x;
}

/// Rebuilds <i|A|j> from diagonal matrix elements only:
///   2 Re<i|A|j> = (<i|+<j|) A (|i>+|j>) - A_ii - A_jj
///   2 Im<i|A|j> = (<i|+i<j|) A (|i>-i|j>) - A_ii - A_jj
inline cplx offdiag_via_diag_check(const DenseMatrix& d, std::size_t i, std::size_t j) {
  if (i == j) return d(i, i);
  auto quad = [&](cplx ci, cplx cj) {
    // <v|A|v> for v = ci|i> + cj|j>
    return std::conj(ci) * ci * d(i, i) + std::conj(ci) * cj * d(i, j) + std::conj(cj) * ci * d(j, i) +
           std::conj(cj) * cj * d(j, j);
  };
  const cplx I(0.0, 1.0);
  const double aii = d(i, i).real(), ajj = d(j, j).real();
  const double re = 0.5 * (quad(1.0, 1.0).real() - aii - ajj);
  const double im = 0.5 * (quad(1.0, -I).real() - aii - ajj);
  return {re, im};
}

/// Trace inner products a_l = Tr[A P_l] / 2^n over all 4^n strings.
inline PauliOperator dense_to_pauli(const DenseMatrix& d) {
  const std::size_t dim = d.dim();
  if (dim == 0 || (dim & (dim - 1)) != 0) throw PreconditionError("dense_to_pauli: dimension not a power of two");
  const int n = std::countr_zero(dim);
  if (n > 6) throw CapExceeded("dense_to_pauli: more than 6 qubits");
  std::vector<PauliTerm> terms;
  for (index_t x = 0; x < dim; ++x)
    for (index_t z = 0; z < dim; ++z) {
      const PauliString p(n, x, z);
      cplx tr = 0.0;
      // Tr[A P] = sum_j <j|A|j^x> <j^x|P|j>
      for (index_t j = 0; j < dim; ++j) tr += d(j, j ^ x) * string_entry_unchecked(p, j ^ x, j);
      terms.push_back({tr / static_cast<double>(dim), p});
    }
  return PauliOperator(n, std::move(terms));
}

}  // namespace matfunc

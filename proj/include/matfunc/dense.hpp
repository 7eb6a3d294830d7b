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
#include <string>
#include <vector>

#include "matfunc/core.hpp"

namespace matfunc {

/// Row-major complex square matrix. Construction enforces the dense cap.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n) {
    if (n > caps().dense_dim) {
      throw CapExceeded("dense dimension " + std::to_string(n) + " exceeds cap " +
                        std::to_string(caps().dense_dim));
    }
    a_.assign(n * n, cplx(0.0));
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t dim() const { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<cplx>& data() const { return a_; }

  DenseMatrix adjoint() const {
    DenseMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  bool is_hermitian(double tol = 1e-12) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
  }

  bool is_real() const {
    return std::all_of(a_.begin(), a_.end(), [](const cplx& z) { return z.imag() == 0.0; });
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs_diff(const DenseMatrix& o) const {
    double m = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) m = std::max(m, std::abs(a_[k] - o.a_[k]));
    return m;
  }

  std::vector<cplx> apply(const std::vector<cplx>& v) const {
    std::vector<cplx> out(n_, cplx(0.0));
    for (std::size_t i = 0; i < n_; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  DenseMatrix& operator*=(cplx c) {
    for (auto& z : a_) z *= c;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(cplx c, DenseMatrix a) { return a *= c; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t n = a.n_;
    DenseMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

/// Kronecker product a (x) b.
inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  DenseMatrix r(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const cplx aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return r;
}

}  // namespace matfunc

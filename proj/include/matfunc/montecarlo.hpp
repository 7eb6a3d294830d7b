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
#include <string>
#include <utility>
#include <vector>

#include "matfunc/access.hpp"
#include "matfunc/core.hpp"
#include "matfunc/estimate.hpp"
#include "matfunc/polynomial.hpp"
#include "matfunc/random.hpp"

namespace matfunc {

struct McConfig {
  double eps = 1e-2;
  double delta = 1e-2;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

namespace detail {

/// Discrete sampler over degrees with probabilities proportional to weights.
class DegreeSampler {
 public:
  DegreeSampler() = default;
  DegreeSampler(std::vector<double> weights, std::vector<cplx> phases) : phases_(std::move(phases)) {
    total_ = 0.0;
    for (double w : weights) total_ += w;
    double s = 0.0;
    for (double w : weights) {
      s += w;
      cumulative_.push_back(total_ > 0 ? s / total_ : 0.0);
    }
    if (!cumulative_.empty()) cumulative_.back() = 1.0;
  }

  double total() const { return total_; }

  std::pair<int, cplx> operator()(RandomStream& rng) const {
    const double u = rng.uniform();
    auto k = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
    if (k >= cumulative_.size()) k = cumulative_.size() - 1;
    return {static_cast<int>(k), phases_[k]};
  }

 private:
  std::vector<double> cumulative_;
  std::vector<cplx> phases_;
  double total_ = 0.0;
};

/// Degree r with probability |alpha_r| b^r / W.
inline DegreeSampler polynomial_degrees(const PolynomialSpec& p, double b) {
  std::vector<double> w;
  std::vector<cplx> ph;
  double pw = 1.0;
  for (const auto& a : p.coefficients) {
    const double m = std::abs(a);
    w.push_back(m * pw);
    ph.push_back(m > 0 ? a / m : cplx(1.0));
    pw *= b;
  }
  return DegreeSampler(std::move(w), std::move(ph));
}

struct WalkResult {
  index_t end = 0;
  cplx weight = 0.0;  // normalized by b^d
};

/// Column-sum importance walk: from column c pick row k with probability
/// |A_kc|/c_c and multiply the weight by (c_c/b) A_kc/|A_kc|.
struct SparseWalker {
  const SparseOracle* o;
  double b;

  WalkResult operator()(RandomStream& rng, index_t start, int d) const {
    WalkResult r{start, 1.0};
    for (int step = 0; step < d; ++step) {
      const auto col = column_entries(*o, r.end);
      double csum = 0.0;
      for (const auto& e : col) csum += std::abs(e.second);
      if (csum == 0.0) return {r.end, 0.0};
      double u = rng.uniform() * csum;
      std::size_t pick = col.size() - 1;
      for (std::size_t k = 0; k < col.size(); ++k) {
        u -= std::abs(col[k].second);
        if (u < 0) {
          pick = k;
          break;
        }
      }
      const cplx a = col[pick].second;
      r.weight *= (csum / b) * (a / std::abs(a));
      r.end = col[pick].first;
    }
    return r;
  }
};

/// d i.i.d. l1-sampled Pauli terms; the weight is the signed entry of their
/// product string in column `start`.
struct PauliWalker {
  const PauliAccess* p;

  WalkResult operator()(RandomStream& rng, index_t start, int d) const {
    const int n = p->n_qubits();
    PauliString acc = PauliString::identity(n);
    int k = 0;
    cplx sign = 1.0;
    for (int step = 0; step < d; ++step) {
      const auto [idx, s] = p->sample_term(rng);
      const PauliString& q = p->op().terms()[idx].string;
      k += multiply_exponent(acc, q);
      acc = PauliString(n, acc.x_bits() ^ q.x_bits(), acc.z_bits() ^ q.z_bits());
      sign *= s;
    }
    const index_t end = start ^ acc.x_bits();
    return {end, sign * i_pow(k) * string_entry_unchecked(acc, end, start)};
  }
};

template <class Walker, class Degrees>
Estimate mc_entry_generic(const Walker& walk, const Degrees& degrees, double W, index_t i, index_t j,
                          const McConfig& cfg, const char* name) {
  Stopwatch sw;
  Estimate e;
  e.algorithm = name;
  e.samples = hoeffding_complex(W, cfg.eps, cfg.delta);
  e.value = sample_mean(e.samples, cfg.seed, cfg.workers, [&](RandomStream& rng) -> cplx {
    const auto [d, phase] = degrees(rng);
    const auto w = walk(rng, j, d);
    return w.end == i ? W * phase * w.weight : cplx(0.0);
  });
  e.half_width = cfg.eps;
  e.wall_time = sw.seconds();
  return e;
}

/// Two independent walks from column i meeting at a common endpoint k,
/// counted when k lies in pi (or always, for the normalizing denominator).
template <class Walker, class Degrees>
Estimate mc_lm_generic(const Walker& walk, const Degrees& degrees, double W, index_t i, index_t dim,
                       bool full_projector, const McConfig& cfg, const char* name) {
  Stopwatch sw;
  Estimate e;
  e.algorithm = name;
  e.samples = hoeffding_real(W * W, cfg.eps, cfg.delta);
  e.value = sample_mean(e.samples, cfg.seed, cfg.workers, [&](RandomStream& rng) -> cplx {
    const auto [d1, ph1] = degrees(rng);
    const auto w1 = walk(rng, i, d1);
    const auto [d2, ph2] = degrees(rng);
    const auto w2 = walk(rng, i, d2);
    if (w1.end != w2.end || (!full_projector && !in_pi(w1.end, dim))) return 0.0;
    return (std::conj(W * ph1 * w1.weight) * (W * ph2 * w2.weight)).real();
  });
  e.half_width = cfg.eps;
  e.wall_time = sw.seconds();
  return e;
}

inline double declared_one_norm(const SparseOracle& o) {
  if (o.meta.one_norm) return *o.meta.one_norm;
  if (o.dim <= caps().dense_dim) return induced_one_norm(o);
  throw PreconditionError("mc_sparse: missing 1-norm metadata");
}

inline Estimate constant_entry(const PolynomialSpec& p, index_t i, index_t j, const char* name) {
  Estimate e;
  e.algorithm = name;
  e.value = i == j ? p.coefficients[0] : cplx(0.0);
  return e;
}

}  // namespace detail

/// Path-integral estimate of <i|p(A)|j> under sparse access.
inline Estimate mc_entry_sparse(const SparseOracle& o, const PolynomialSpec& p, index_t i, index_t j,
                                const McConfig& cfg) {
  if (p.degree() == 0) return detail::constant_entry(p, i, j, "mc_sparse");
  const double b = detail::declared_one_norm(o);
  const auto deg = detail::polynomial_degrees(p, b);
  return detail::mc_entry_generic(detail::SparseWalker{&o, b}, deg, deg.total(), i, j, cfg, "mc_sparse");
}

/// Estimate of <i|p(A)|j> from l1-sampled Pauli term products.
inline Estimate mc_entry_pauli(const PauliAccess& pa, const PolynomialSpec& p, index_t i, index_t j,
                               const McConfig& cfg) {
  if (p.degree() == 0) return detail::constant_entry(p, i, j, "mc_pauli");
  if (pa.lambda() <= 0) throw PreconditionError("mc_pauli: zero operator");
  const auto deg = detail::polynomial_degrees(p, pa.lambda());
  return detail::mc_entry_generic(detail::PauliWalker{&pa}, deg, deg.total(), i, j, cfg, "mc_pauli");
}

/// <i|p(A)^dag pi p(A)|i> under sparse access. With `full_projector` the
/// projector is the identity, which gives ||p(A)|i>||^2.
inline Estimate mc_lm(const SparseOracle& o, const PolynomialSpec& p, index_t i, const McConfig& cfg,
                      bool full_projector = false) {
  const double b = p.degree() == 0 ? 0.0 : detail::declared_one_norm(o);
  const auto deg = detail::polynomial_degrees(p, b);
  if (p.degree() == 0) {
    Estimate e;
    e.algorithm = "mc_sparse";
    e.value = std::norm(p.coefficients[0]) * ((full_projector || in_pi(i, o.dim)) ? 1.0 : 0.0);
    return e;
  }
  return detail::mc_lm_generic(detail::SparseWalker{&o, b}, deg, deg.total(), i, o.dim, full_projector, cfg,
                               "mc_sparse");
}

/// Pauli form: pi = (1 + Z (x) 1)/2 reduces each sampled pair of product
/// strings to [same X part] conj(v_L) v_R [endpoint in pi].
inline Estimate mc_lm(const PauliAccess& pa, const PolynomialSpec& p, index_t i, const McConfig& cfg,
                      bool full_projector = false) {
  if (p.degree() == 0) {
    Estimate e;
    e.algorithm = "mc_pauli";
    e.value = std::norm(p.coefficients[0]) * ((full_projector || in_pi(i, pa.dim())) ? 1.0 : 0.0);
    return e;
  }
  if (pa.lambda() <= 0) throw PreconditionError("mc_pauli: zero operator");
  const auto deg = detail::polynomial_degrees(p, pa.lambda());
  return detail::mc_lm_generic(detail::PauliWalker{&pa}, deg, deg.total(), i, pa.dim(), full_projector, cfg,
                               "mc_pauli");
}

/// Nested truncated-Taylor sampler for e^{iAt} = (e^{iAt/r})^r: each of the
/// r fragments draws its own order k with weight u^k/k!, u = gamma|t|/r.
class TaylorMultiIndex {
 public:
  TaylorMultiIndex(double t, double gamma, const TaylorFragments& f) : r_(f.r) {
    const double u = gamma * std::abs(t) / f.r;
    std::vector<double> w;
    std::vector<cplx> ph;
    double term = 1.0, z = 0.0;
    const cplx step(0.0, t >= 0 ? 1.0 : -1.0);
    for (int k = 0; k <= f.K; ++k) {
      if (k > 0) term *= u / k;
      w.push_back(term);
      ph.push_back(std::pow(step, k));
      z += term;
    }
    inner_ = detail::DegreeSampler(std::move(w), std::move(ph));
    W_ = std::pow(z, f.r);
  }

  double W() const { return W_; }

  std::pair<int, cplx> operator()(RandomStream& rng) const {
    int d = 0;
    cplx ph = 1.0;
    for (int q = 0; q < r_; ++q) {
      const auto [k, p] = inner_(rng);
      d += k;
      ph *= p;
    }
    return {d, ph};
  }

 private:
  int r_;
  detail::DegreeSampler inner_;
  double W_ = 1.0;
};

}  // namespace matfunc

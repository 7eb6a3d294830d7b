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
#include <optional>
#include <string>
#include <variant>

#include "matfunc/access.hpp"
#include "matfunc/core.hpp"
#include "matfunc/dense.hpp"
#include "matfunc/estimate.hpp"
#include "matfunc/exact.hpp"
#include "matfunc/montecarlo.hpp"
#include "matfunc/polynomial.hpp"
#include "matfunc/supersparse.hpp"

namespace matfunc {

/// One matrix under whichever access models are available for it.
struct MatrixInstance {
  index_t dim = 0;
  MatrixMeta meta;
  std::optional<SparseOracle> sparse;
  std::optional<PauliAccess> pauli;
  std::optional<SuperSparseMatrix> supersparse;
  std::optional<DenseMatrix> dense;

  static MatrixInstance from_sparse(SparseOracle o) {
    MatrixInstance m;
    m.dim = o.dim;
    m.meta = o.meta;
    m.sparse = std::move(o);
    return m;
  }
  static MatrixInstance from_pauli(PauliAccess p) {
    MatrixInstance m;
    m.dim = p.dim();
    m.meta = p.meta();
    m.pauli = std::move(p);
    return m;
  }
  static MatrixInstance from_supersparse(SuperSparseMatrix s) {
    MatrixInstance m;
    m.dim = s.dim();
    m.meta = s.meta();
    m.supersparse = std::move(s);
    return m;
  }
  static MatrixInstance from_dense(DenseMatrix d, MatrixMeta meta = {}) {
    MatrixInstance m;
    m.dim = d.dim();
    m.meta = meta;
    m.dense = std::move(d);
    return m;
  }

  /// Access model name: supersparse, pauli, sparse or dense.
  std::string model() const {
    if (supersparse) return "supersparse";
    if (pauli) return "pauli";
    if (sparse) return "sparse";
    if (dense) return "dense";
    return "none";
  }
};

/// Sparse access to any instance.
inline SparseOracle sparse_view(const MatrixInstance& m) {
  SparseOracle o;
  if (m.sparse) o = *m.sparse;
  else if (m.supersparse) o = sparse_from_supersparse(*m.supersparse);
  else if (m.pauli) o = pauli_to_sparse_oracle(*m.pauli);
  else if (m.dense) o = sparse_from_dense(*m.dense);
  else throw PreconditionError("instance has no access model");
  o.meta = m.meta;
  return o;
}

/// Dense matrix of any instance within the dense cap.
inline DenseMatrix dense_view(const MatrixInstance& m) {
  if (m.dense) return *m.dense;
  if (m.supersparse) return to_dense(*m.supersparse);
  if (m.pauli) return to_dense(m.pauli->op());
  if (m.sparse) return to_dense(*m.sparse);
  throw PreconditionError("instance has no access model");
}

/// The instance c A, with declared norms rescaled.
inline MatrixInstance scaled(const MatrixInstance& m, double c) {
  if (!(c > 0)) throw PreconditionError("scale must be positive");
  MatrixInstance r;
  r.dim = m.dim;
  r.meta = m.meta;
  for (auto* v : {&r.meta.one_norm, &r.meta.op_norm, &r.meta.pauli_norm})
    if (*v) **v *= c;
  if (m.meta.eta) r.meta.eta = 1.0 - c * (1.0 - *m.meta.eta);
  if (m.sparse) {
    r.sparse = *m.sparse;
    r.sparse->entry = [e = m.sparse->entry, c](index_t i, index_t j) { return c * e(i, j); };
    r.sparse->meta = r.meta;
  }
  if (m.pauli) r.pauli = PauliAccess(cplx(c) * m.pauli->op(), r.meta);
  if (m.supersparse) {
    auto es = m.supersparse->entries();
    for (auto& e : es) e.v *= c;
    r.supersparse = SuperSparseMatrix(m.dim, std::move(es), r.meta);
  }
  if (m.dense) r.dense = cplx(c) * *m.dense;
  return r;
}

/// What a single evaluation returns: an entry, the LM numerator, or the LM
/// denominator ||f(A)|i>||^2.
enum class Quantity { Entry, Lm, Norm };

namespace detail {

inline McConfig stat_config(const McConfig& cfg, double eps) {
  McConfig c = cfg;
  c.eps = eps;
  return c;
}

inline const PauliAccess& need_pauli(const MatrixInstance& m, Algorithm a) {
  if (!m.pauli) throw PreconditionError(std::string(algorithm_name(a)) + " needs Pauli access");
  return *m.pauli;
}

inline Target quantity_target(Quantity q, index_t i, index_t j) {
  return q == Quantity::Entry ? Target::entry(i, j) : Target::lm(i);
}

/// Upper bound on ||A|| used to bring the spectrum into [-1, 1].
inline double spectral_scale(const MatrixInstance& m) {
  if (m.meta.op_norm) return *m.meta.op_norm;
  if (m.meta.one_norm) return *m.meta.one_norm;
  if (m.pauli) return m.pauli->lambda();
  if (m.supersparse) return induced_one_norm(*m.supersparse);
  if (m.dense) return operator_norm(*m.dense);
  throw PreconditionError("declared operator norm or 1-norm required");
}

/// The b of the sampling bound W = ||p(b x)||_l1 for an MC algorithm.
inline double mc_scale(const MatrixInstance& m, Algorithm a) {
  if (a == Algorithm::McPauli) return need_pauli(m, a).lambda();
  if (m.meta.one_norm) return *m.meta.one_norm;
  return declared_one_norm(sparse_view(m));
}

}  // namespace detail

/// One polynomial quantity by the named algorithm, with no approximation error.
inline Estimate evaluate_poly(const MatrixInstance& m, Algorithm alg, const PolynomialSpec& p, Quantity q, index_t i,
                              index_t j, const McConfig& cfg) {
  if (i >= m.dim || j >= m.dim) throw PreconditionError("index out of range");
  Stopwatch sw;
  Estimate e;
  auto pick = [&](const LmParts& r) { return q == Quantity::Lm ? r.num : r.den; };
  switch (alg) {
    case Algorithm::ExactPath: {
      const SparseOracle o = sparse_view(m);
      e.value = q == Quantity::Entry ? exact_entry_poly(o, p, i, j) : cplx(pick(exact_lm_parts(o, p, i)));
      break;
    }
    case Algorithm::SupersparseCb:
      if (!m.supersparse) throw PreconditionError("supersparse_cb needs a super-sparse instance");
      e.value = q == Quantity::Entry ? supersparse_entry(*m.supersparse, p, i, j)
                                     : cplx(pick(supersparse_lm_parts(*m.supersparse, p, i)));
      break;
    case Algorithm::SupersparsePauli: {
      const auto fa = pauli_supersparse_apply(detail::need_pauli(m, alg), p);
      e.value = q == Quantity::Entry ? pauli_supersparse_entry(fa, i, j) : cplx(pick(pauli_supersparse_lm_parts(fa, i)));
      break;
    }
    case Algorithm::McSparse: {
      SparseOracle o = sparse_view(m);
      o.meta.one_norm = detail::mc_scale(m, alg);
      e = q == Quantity::Entry ? mc_entry_sparse(o, p, i, j, cfg) : mc_lm(o, p, i, cfg, q == Quantity::Norm);
      break;
    }
    case Algorithm::McPauli: {
      const PauliAccess& pa = detail::need_pauli(m, alg);
      e = q == Quantity::Entry ? mc_entry_pauli(pa, p, i, j, cfg) : mc_lm(pa, p, i, cfg, q == Quantity::Norm);
      break;
    }
    case Algorithm::Sketch:
      if (q == Quantity::Norm) throw PreconditionError("sketch evaluates entries and LM targets only");
      e = sketch_then_eval(detail::need_pauli(m, alg), p, detail::quantity_target(q, i, j), cfg.eps, cfg.delta,
                           cfg.seed);
      break;
    case Algorithm::NormDecay:
      throw PreconditionError("norm_decay applies to monomials only");
    case Algorithm::Auto:
      throw PreconditionError("algorithm must be resolved before evaluation");
  }
  e.algorithm = algorithm_name(alg);
  e.wall_time = sw.seconds();
  return e;
}

/// <i|A^m|j> (or the LM parts of A^m) under a declared gap ||A|| <= 1 - eta.
///
/// Past m > ln eps / ln(1 - eta) the answer 0 is already eps-accurate (the LM
/// threshold is half of that). Below it the call delegates to Pauli MC or to
/// the exact path recursion.
inline Estimate norm_decay(const MatrixInstance& m, int power, Quantity q, index_t i, index_t j, const McConfig& cfg) {
  if (power < 0) throw PreconditionError("norm_decay: m must be >= 0");
  const auto eta = m.meta.eta;
  if (!eta) throw PreconditionError("norm_decay: missing declared spectral gap eta");
  if (!(*eta > 0 && *eta < 1)) throw PreconditionError("norm_decay: eta must lie in (0,1)");
  if (i >= m.dim || j >= m.dim) throw PreconditionError("index out of range");
  Stopwatch sw;
  const double l = std::log1p(-*eta);
  Estimate e;
  const bool entry = q == Quantity::Entry;
  const double threshold = entry ? std::log(cfg.eps) / l : std::log(cfg.eps) / (2.0 * l);
  if (power > threshold) {
    e.value = 0.0;
    e.half_width = std::exp((entry ? 1.0 : 2.0) * power * l);
  } else if (m.pauli) {
    const auto p = PolynomialSpec::monomial(power);
    e = entry ? mc_entry_pauli(*m.pauli, p, i, j, cfg) : mc_lm(*m.pauli, p, i, cfg, q == Quantity::Norm);
  } else {
    // A is Hermitian, so <i|A^m pi A^m|i> needs no adjoint.
    const SparseOracle o = sparse_view(m);
    if (entry) e.value = exact_entry_path(o, i, j, power);
    else if (q == Quantity::Lm) e.value = exact_lm_path(o, i, i, power, power);
    else e.value = exact_entry_path(o, i, i, 2 * power);
  }
  e.algorithm = algorithm_name(Algorithm::NormDecay);
  e.wall_time = sw.seconds();
  return e;
}

inline Estimate norm_decay_entry(const MatrixInstance& m, int power, index_t i, index_t j, const McConfig& cfg) {
  return norm_decay(m, power, Quantity::Entry, i, j, cfg);
}

inline Estimate norm_decay_lm(const MatrixInstance& m, int power, index_t i, const McConfig& cfg) {
  return norm_decay(m, power, Quantity::Lm, i, i, cfg);
}

/// Approximation budget that keeps an LM error e (2 P + e) within `budget`.
inline double lm_approximation_budget(double P, double budget) { return -P + std::sqrt(P * P + budget); }

/// A^{-1} through inverse_poly: half of eps goes to the approximation, the
/// rest to the estimator.
inline Estimate inverse_quantity(const MatrixInstance& m, double kappa, Algorithm alg, Quantity q, index_t i,
                                 index_t j, const McConfig& cfg) {
  if (m.meta.kappa && *m.meta.kappa > kappa * (1 + 1e-12))
    throw PreconditionError("inverse: declared condition number exceeds kappa");
  const double half = cfg.eps / 2;
  const bool entry = q == Quantity::Entry;
  const PolynomialSpec p = inverse_poly(kappa, entry ? half : lm_approximation_budget(kappa, half));
  const double c = p.certified_error;
  Estimate e = evaluate_poly(m, alg, p, q, i, j, detail::stat_config(cfg, half));
  e.half_width += entry ? c : c * (2 * kappa + c);
  return e;
}

inline Estimate inverse_entry(const MatrixInstance& m, double kappa, index_t i, index_t j, Algorithm alg,
                              const McConfig& cfg) {
  return inverse_quantity(m, kappa, alg, Quantity::Entry, i, j, cfg);
}

inline Estimate inverse_lm(const MatrixInstance& m, double kappa, index_t i, Algorithm alg, const McConfig& cfg) {
  return inverse_quantity(m, kappa, alg, Quantity::Lm, i, i, cfg);
}

/// e^{iAt}. Deterministic algorithms evaluate the Anger-Jacobi polynomial
/// of A/gamma at time gamma t with eps/4; Monte Carlo algorithms sample the
/// fragmented Taylor series with eps/2 truncation and eps/2 statistics.
inline Estimate timeevo_quantity(const MatrixInstance& m, double t, Algorithm alg, Quantity q, index_t i, index_t j,
                                 const McConfig& cfg) {
  if (i >= m.dim || j >= m.dim) throw PreconditionError("index out of range");
  const bool entry = q == Quantity::Entry;
  if (t == 0.0) {
    Estimate e;
    e.algorithm = algorithm_name(alg);
    if (entry) e.value = i == j ? 1.0 : 0.0;
    else e.value = (q == Quantity::Norm || in_pi(i, m.dim)) ? 1.0 : 0.0;
    return e;
  }
  if (alg == Algorithm::McSparse || alg == Algorithm::McPauli) {
    Stopwatch sw;
    const double gamma = detail::mc_scale(m, alg);
    const double budget = entry ? cfg.eps / 2 : lm_approximation_budget(1.0, cfg.eps / 2);
    const TaylorFragments f = taylor_fragment_spec(t, gamma, std::min(budget, 0.5));
    const TaylorMultiIndex degrees(t, gamma, f);
    const McConfig sc = detail::stat_config(cfg, cfg.eps / 2);
    const char* name = algorithm_name(alg);
    Estimate e;
    auto run = [&](const auto& walk) {
      return entry ? detail::mc_entry_generic(walk, degrees, degrees.W(), i, j, sc, name)
                   : detail::mc_lm_generic(walk, degrees, degrees.W(), i, m.dim, q == Quantity::Norm, sc, name);
    };
    if (alg == Algorithm::McPauli) {
      e = run(detail::PauliWalker{&detail::need_pauli(m, alg)});
    } else {
      const SparseOracle o = sparse_view(m);
      e = run(detail::SparseWalker{&o, gamma});
    }
    const double c = f.remainder;
    e.half_width += entry ? c : c * (2 + c);
    e.wall_time = sw.seconds();
    return e;
  }
  if (alg == Algorithm::Sketch || alg == Algorithm::NormDecay)
    throw PreconditionError(std::string(algorithm_name(alg)) + " does not apply to time evolution");
  const double gamma = detail::spectral_scale(m);
  const double budget = entry ? cfg.eps / 4 : lm_approximation_budget(1.0, cfg.eps / 4);
  const PolynomialSpec p = anger_jacobi_poly(gamma * t, std::min(budget, 0.36));
  const double c = p.certified_error;
  Estimate e = evaluate_poly(gamma == 1.0 ? m : scaled(m, 1.0 / gamma), alg, p, q, i, j, cfg);
  e.half_width += entry ? c : c * (2 + c);
  return e;
}

inline Estimate timeevo_entry(const MatrixInstance& m, double t, index_t i, index_t j, Algorithm alg,
                              const McConfig& cfg) {
  return timeevo_quantity(m, t, alg, Quantity::Entry, i, j, cfg);
}

inline Estimate timeevo_lm(const MatrixInstance& m, double t, index_t i, Algorithm alg, const McConfig& cfg) {
  return timeevo_quantity(m, t, alg, Quantity::Lm, i, i, cfg);
}

using FunctionArg = std::variant<FunctionSpec, PolynomialSpec>;

/// One quantity of f(A) by a resolved algorithm.
inline Estimate evaluate_quantity(const MatrixInstance& m, const FunctionArg& fn, Algorithm alg, Quantity q, index_t i,
                                  index_t j, const McConfig& cfg) {
  if (const auto* p = std::get_if<PolynomialSpec>(&fn)) return evaluate_poly(m, alg, *p, q, i, j, cfg);
  const FunctionSpec& f = std::get<FunctionSpec>(fn);
  f.validate();
  switch (f.kind) {
    case FunctionSpec::Kind::Monomial:
      if (alg == Algorithm::NormDecay) return norm_decay(m, f.m, q, i, j, cfg);
      return evaluate_poly(m, alg, PolynomialSpec::monomial(f.m), q, i, j, cfg);
    case FunctionSpec::Kind::Chebyshev:
      return evaluate_poly(m, alg, chebyshev_poly(f.m), q, i, j, cfg);
    case FunctionSpec::Kind::Inverse:
      if (alg == Algorithm::Sketch) throw PreconditionError("sketch applies to bounded polynomials only");
      return inverse_quantity(m, f.kappa, alg, q, i, j, cfg);
    case FunctionSpec::Kind::TimeEvolution:
      return timeevo_quantity(m, f.t, alg, q, i, j, cfg);
  }
  throw PreconditionError("unknown function kind");
}

namespace detail {

inline std::string table_row(const FunctionArg& fn, const std::string& access) {
  if (std::holds_alternative<PolynomialSpec>(fn)) return "general polynomial, " + access + " access";
  switch (std::get<FunctionSpec>(fn).kind) {
    case FunctionSpec::Kind::Monomial: return "A^m, " + access + " access: BQP-complete for c=1";
    case FunctionSpec::Kind::Chebyshev: return "T_m(A), " + access + " access: BQP-complete for c=1";
    case FunctionSpec::Kind::Inverse:
      return "A^{-1}, " + access + " access: BQP-complete for c,k=O(1/polylog N)";
    case FunctionSpec::Kind::TimeEvolution:
      return "e^{-iAt}, " + access + " access: BQP-complete for c,k=O(1/polylog N)";
  }
  return access;
}

/// Polynomial the router reasons about; nullopt when no scale is declared.
inline std::optional<PolynomialSpec> routing_poly(const MatrixInstance& m, const FunctionArg& fn, double eps,
                                                  double b) {
  if (const auto* p = std::get_if<PolynomialSpec>(&fn)) return *p;
  const FunctionSpec& f = std::get<FunctionSpec>(fn);
  switch (f.kind) {
    case FunctionSpec::Kind::Monomial: return PolynomialSpec::monomial(f.m);
    case FunctionSpec::Kind::Chebyshev: return chebyshev_poly(f.m);
    case FunctionSpec::Kind::Inverse: return inverse_poly(f.kappa, eps / 2);
    case FunctionSpec::Kind::TimeEvolution:
      if (f.t == 0.0) return PolynomialSpec::monomial(0);
      if (!(b > 0)) return std::nullopt;
      return anger_jacobi_poly(b * f.t, std::min(eps / 4, 0.36));
  }
  (void)m;
  return std::nullopt;
}

inline bool samples_within_cap(const FunctionArg& fn, const PolynomialSpec& p, double b, const Target& target,
                               double eps, double delta) {
  try {
    double W;
    const auto* f = std::get_if<FunctionSpec>(&fn);
    if (f && f->kind == FunctionSpec::Kind::TimeEvolution) {
      const TaylorFragments fr = taylor_fragment_spec(f->t, b, std::min(eps / 2, 0.5));
      W = TaylorMultiIndex(f->t, b, fr).W();
    } else {
      W = l1_rescaled_norm(p, b);
    }
    if (target.kind == Target::Kind::Entry) hoeffding_complex(W, eps / 2, delta);
    else hoeffding_real(W * W, eps / 4, delta / 2);
    return true;
  } catch (const CapExceeded&) {
    return false;
  }
}

}  // namespace detail

/// Regime selection from metadata alone. Rules apply in order: super-sparse
/// forms, declared unit norm for Monte Carlo, declared gap for monomials, a
/// bounded exact path, and otherwise refusal naming the matching complexity row.
inline Algorithm route(const MatrixInstance& m, const EstimateRequest& req) {
  if (req.algorithm != Algorithm::Auto) return req.algorithm;
  if (m.supersparse) return Algorithm::SupersparseCb;
  if (m.pauli && static_cast<int>(m.pauli->op().size()) <= caps().closure_generators)
    return Algorithm::SupersparsePauli;

  const auto* fs = std::get_if<FunctionSpec>(&req.function);
  const bool timeevo = fs && fs->kind == FunctionSpec::Kind::TimeEvolution;
  std::optional<double> b;
  Algorithm mc = Algorithm::McSparse;
  if (m.pauli) {
    b = m.pauli->lambda();
    mc = Algorithm::McPauli;
  } else if (m.meta.one_norm && (m.sparse || m.dense)) {
    b = *m.meta.one_norm;
  }
  if (b && (timeevo || *b <= 1.0 + 1e-12)) {
    const auto p = detail::routing_poly(m, req.function, req.eps, *b);
    if (p && detail::samples_within_cap(req.function, *p, *b, req.target, req.eps, req.delta)) return mc;
  }

  if (m.meta.eta && fs && fs->kind == FunctionSpec::Kind::Monomial) return Algorithm::NormDecay;

  int s = 0;
  if (m.sparse) s = m.sparse->sparsity;
  else if (m.pauli) s = static_cast<int>(m.pauli->op().size());
  else if (m.dense) s = static_cast<int>(m.dim);
  const std::optional<double> scale = m.meta.op_norm ? m.meta.op_norm : m.meta.one_norm;
  const auto p = detail::routing_poly(m, req.function, req.eps, scale.value_or(0.0));
  if (p && s > 0 && (s == 1 || p->degree() * std::log(static_cast<double>(s)) <= std::log(caps().path_work)))
    return Algorithm::ExactPath;

  const std::string why = "s = " + std::to_string(s) + ", degree " + (p ? std::to_string(p->degree()) : "unknown") +
                          (b ? ", norm bound " + std::to_string(*b) : ", no declared norm bound") +
                          "; no classically tractable regime applies";
  throw HardRegime(detail::table_row(req.function, m.model()), why);
}

/// Reference value of a target for instances within the dense cap.
/// Polynomial functions are applied to the target column by exact sparse
/// products; other functions go through the dense eigendecomposition.
inline cplx dense_reference(const MatrixInstance& m, const FunctionArg& fn, const Target& t) {
  if (m.dim > caps().dense_dim)
    throw CapExceeded("reference: dimension " + std::to_string(m.dim) + " exceeds dense cap");
  std::optional<PolynomialSpec> poly;
  if (const auto* p = std::get_if<PolynomialSpec>(&fn)) poly = *p;
  else if (const auto& f = std::get<FunctionSpec>(fn); f.kind == FunctionSpec::Kind::Monomial)
    poly = PolynomialSpec::monomial(f.m);
  else if (f.kind == FunctionSpec::Kind::Chebyshev)
    poly = chebyshev_poly(f.m);
  if (poly) {
    const SparseOracle o = sparse_view(m);
    switch (t.kind) {
      case Target::Kind::Entry: return exact_entry_poly(o, *poly, t.i, t.j);
      case Target::Kind::LM: return exact_lm_parts(o, *poly, t.i).num;
      case Target::Kind::NLM: return exact_lm_parts(o, *poly, t.i).normalized();
    }
  }
  const DenseMatrix fa = apply_function(dense_view(m), scalar_function(std::get<FunctionSpec>(fn)));
  switch (t.kind) {
    case Target::Kind::Entry: return fa(t.i, t.j);
    case Target::Kind::LM: return lm_from_function(fa, t.i);
    case Target::Kind::NLM: return normalized_lm_from_function(fa, t.i);
  }
  throw PreconditionError("unknown target kind");
}

/// Routes (unless forced) and evaluates the request. Normalized LM is the
/// ratio of the LM and ||f(A)|i>||^2, each with half the budget.
inline Estimate estimate(const MatrixInstance& m, const EstimateRequest& req) {
  req.validate();
  Stopwatch sw;
  const Algorithm alg = route(m, req);
  const McConfig cfg{req.eps, req.delta, req.seed, req.workers};
  const Target& t = req.target;
  Estimate e;
  if (t.kind == Target::Kind::Entry) {
    e = evaluate_quantity(m, req.function, alg, Quantity::Entry, t.i, t.j, cfg);
  } else if (t.kind == Target::Kind::LM) {
    e = evaluate_quantity(m, req.function, alg, Quantity::Lm, t.i, t.i, cfg);
  } else if (alg == Algorithm::Sketch) {
    const auto* p = std::get_if<PolynomialSpec>(&req.function);
    const auto* f = std::get_if<FunctionSpec>(&req.function);
    PolynomialSpec poly;
    if (p) poly = *p;
    else if (f->kind == FunctionSpec::Kind::Monomial || f->kind == FunctionSpec::Kind::Chebyshev) poly = to_polynomial(*f);
    else throw PreconditionError("sketch applies to bounded polynomials only");
    e = sketch_then_eval(detail::need_pauli(m, alg), poly, t, req.eps, req.delta, req.seed);
  } else {
    McConfig half{req.eps / 2, req.delta / 2, req.seed, req.workers};
    const Estimate num = evaluate_quantity(m, req.function, alg, Quantity::Lm, t.i, t.i, half);
    half.seed = mix64(req.seed ^ 0x6e6f726d616c697aULL);
    const Estimate den = evaluate_quantity(m, req.function, alg, Quantity::Norm, t.i, t.i, half);
    e = ratio_estimate(num, den);
  }
  e.algorithm = algorithm_name(alg);
  if (req.g) e.decision = decide(e, *req.g);
  e.wall_time = sw.seconds();
  return e;
}

}  // namespace matfunc

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

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "matfunc/access.hpp"
#include "matfunc/circuit.hpp"
#include "matfunc/core.hpp"
#include "matfunc/estimate.hpp"
#include "matfunc/pauli.hpp"
#include "matfunc/polynomial.hpp"
#include "matfunc/router.hpp"

namespace matfunc {

/// Compact: the clock is an M-level register, index = data * M + clock.
/// Unary: M clock qubits after the data qubits, step k sets clock qubit k.
enum class Encoding { Compact, Unary };

inline const char* encoding_name(Encoding e) { return e == Encoding::Compact ? "compact" : "unary"; }

inline Encoding parse_encoding(const std::string& s) {
  if (s == "compact") return Encoding::Compact;
  if (s == "unary") return Encoding::Unary;
  throw PreconditionError("unknown encoding: " + s);
}

/// The data operation attached to a clock transition.
struct StepOp {
  enum class Kind { Identity, Gate, PhaseFlip };  // PhaseFlip: Z on data qubit 0
  Kind kind = Kind::Identity;
  Gate gate;

  static StepOp identity() { return {}; }
  static StepOp of(const Gate& g) { return {Kind::Gate, g}; }
  static StepOp phase_flip() { return {Kind::PhaseFlip, Gate{}}; }

  std::vector<std::pair<index_t, double>> column(int rd, index_t d) const {
    switch (kind) {
      case Kind::Identity: return {{d, 1.0}};
      case Kind::Gate: return gate_column(gate, rd, d);
      case Kind::PhaseFlip: return {{d, (d & qubit_mask(rd, 0)) ? -1.0 : 1.0}};
    }
    return {};
  }

  PauliOperator pauli(int n) const {
    switch (kind) {
      case Kind::Identity: return PauliOperator::identity(n);
      case Kind::Gate: return decompose_gate(gate, n);
      case Kind::PhaseFlip: return PauliOperator::single(n, 0, 'Z');
    }
    return PauliOperator(n);
  }
};

/// diag * 1 + sum_k coef_k |to_k><from_k| (x) V_k, plus the adjoint of the
/// sum when `hermitize` is set.
struct ClockMatrix {
  int M = 0;   // clock positions
  int rd = 0;  // data qubits
  double diag = 0.0;
  bool hermitize = true;
  struct Transition {
    int from, to;
    double coef;
    StepOp v;
  };
  std::vector<Transition> transitions;

  index_t compact_dim() const { return static_cast<index_t>(M) << rd; }
  index_t compact_index(index_t data, int clock) const { return data * M + static_cast<index_t>(clock); }
  int unary_qubits() const { return rd + M; }
  index_t unary_index(index_t data, int clock) const {
    return (data << M) | (index_t{1} << (M - 1 - clock));
  }

  std::map<std::pair<index_t, index_t>, double> compact_entries() const {
    std::map<std::pair<index_t, index_t>, double> acc;
    const index_t nd = index_t{1} << rd;
    if (diag != 0.0)
      for (index_t k = 0; k < compact_dim(); ++k) acc[{k, k}] += diag;
    for (const auto& t : transitions)
      for (index_t d = 0; d < nd; ++d)
        for (const auto& [d2, v] : t.v.column(rd, d)) {
          const index_t row = compact_index(d2, t.to), col = compact_index(d, t.from);
          acc[{row, col}] += t.coef * v;
          if (hermitize) acc[{col, row}] += t.coef * v;  // every V is real
        }
    return acc;
  }

  /// Pauli form on the unary encoding.
  PauliOperator unary_pauli() const {
    const int n = unary_qubits();
    if (n > caps().unary_qubits)
      throw CapExceeded("unary clock: " + std::to_string(n) + " qubits exceed cap of " +
                        std::to_string(caps().unary_qubits));
    PauliOperator out = PauliOperator::identity(n, diag);
    for (const auto& t : transitions) {
      // |0><1| on clock qubit `from`, |1><0| on clock qubit `to`
      const auto lower = PauliOperator(n, {{0.5, PauliString::single(n, rd + t.from, 'X')},
                                           {cplx(0, 0.5), PauliString::single(n, rd + t.from, 'Y')}});
      const auto raise = PauliOperator(n, {{0.5, PauliString::single(n, rd + t.to, 'X')},
                                           {cplx(0, -0.5), PauliString::single(n, rd + t.to, 'Y')}});
      const PauliOperator term = cplx(t.coef) * (lower * raise * t.v.pauli(n));
      out = out + term;
      if (hermitize) out = out + term.adjoint();
    }
    return out;
  }
};

inline std::vector<std::tuple<index_t, index_t, cplx>> to_triplets(const std::map<std::pair<index_t, index_t>, double>& m) {
  std::vector<std::tuple<index_t, index_t, cplx>> t;
  t.reserve(m.size());
  for (const auto& [ij, v] : m)
    if (v != 0.0) t.emplace_back(ij.first, ij.second, v);
  return t;
}

inline double column_norm(const std::map<std::pair<index_t, index_t>, double>& m) {
  std::map<index_t, double> cols;
  for (const auto& [ij, v] : m) cols[ij.second] += std::abs(v);
  double s = 0.0;
  for (const auto& [c, v] : cols) s = std::max(s, v);
  return s;
}

/// A generated instance with its analytically predicted answer.
struct ClockInstance {
  std::string family;
  Circuit circuit;
  Encoding encoding = Encoding::Compact;
  double scale = 1.0;
  int M = 0;
  MatrixInstance matrix;
  FunctionSpec function;
  Target target;
  cplx predicted = 0.0;
  std::optional<double> predicted_normalized;
  std::optional<double> norm;  // ||f(A)|i>|| where known in closed form
  std::string formula;
  double alpha1_sq = 0.0;
  double g = 0.0;
  double eps = 0.0;
};

namespace detail {

inline void check_scale(double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) throw PreconditionError("scale must lie in (0,1]");
}

inline MatrixInstance emit(const ClockMatrix& cm, Encoding enc, double scale, MatrixMeta meta) {
  if (enc == Encoding::Unary) {
    MatrixMeta m = meta;
    m.one_norm.reset();
    return MatrixInstance::from_pauli(PauliAccess(cplx(scale) * cm.unary_pauli(), m));
  }
  auto entries = cm.compact_entries();
  for (auto& [ij, v] : entries) v *= scale;
  meta.one_norm = column_norm(entries);
  return MatrixInstance::from_sparse(sparse_from_triplets(cm.compact_dim(), to_triplets(entries), meta));
}

inline index_t clock_index(const ClockMatrix& cm, Encoding enc, index_t data, int clock) {
  return enc == Encoding::Compact ? cm.compact_index(data, clock) : cm.unary_index(data, clock);
}

/// Circuit on [flag][r qubits] with gates shifted past the flag.
inline std::vector<Gate> shifted_gates(const Circuit& c) {
  std::vector<Gate> g;
  for (const auto& x : c.gates) g.push_back(x.shifted(1));
  return g;
}

}  // namespace detail

/// theta_l = cos(2 pi l / M).
inline double clock_theta(int l, int M) { return std::cos(2.0 * kPi * l / M); }

/// (1/M)(1 + 2 sum_{l=1}^{(M-1)/2} theta_l^m).
inline double janzing_e0(int M, long long m) {
  double s = 1.0;
  for (int l = 1; l <= (M - 1) / 2; ++l) s += 2.0 * std::pow(clock_theta(l, M), static_cast<double>(m));
  return s / M;
}

/// Janzing clock for C' = C^dag Z C: M = 2T+1 cyclic steps carrying
/// U_1..U_T, Z on the output qubit, U_T..U_1; A = (W + W^dag)/2.
inline ClockMatrix janzing_clock(const Circuit& c) {
  c.validate();
  ClockMatrix cm;
  cm.M = 2 * c.T() + 1;
  cm.rd = c.r;
  std::vector<StepOp> seq;
  for (const auto& g : c.gates) seq.push_back(StepOp::of(g));
  seq.push_back(StepOp::phase_flip());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) seq.push_back(StepOp::of(*it));
  for (int l = 0; l < cm.M; ++l) cm.transitions.push_back({l, (l + 1) % cm.M, 0.5, seq[l]});
  return cm;
}

/// <s|f(scale A)|s> = (|a0|^2/M)[f(s) + 2 sum f(s theta_l)] + (|a1|^2/M)[f(-s) + 2 sum f(-s theta_l)].
inline cplx janzing_prediction(const FunctionSpec& f, int M, double alpha1_sq, double scale = 1.0) {
  const ScalarFunction F = scalar_function(f);
  cplx plus = F(scale), minus = F(-scale);
  for (int l = 1; l <= (M - 1) / 2; ++l) {
    plus += 2.0 * F(scale * clock_theta(l, M));
    minus += 2.0 * F(-scale * clock_theta(l, M));
  }
  return ((1.0 - alpha1_sq) * plus + alpha1_sq * minus) / static_cast<double>(M);
}

/// Diagonal-entry instance; the default function is x^{M^3}.
inline ClockInstance janzing_entry_instance(const Circuit& c, std::optional<FunctionSpec> f = std::nullopt,
                                            double scale = 1.0, Encoding enc = Encoding::Compact) {
  detail::check_scale(scale);
  const ClockMatrix cm = janzing_clock(c);
  if (cm.M % 2 == 0) throw PreconditionError("janzing: M must be odd");
  ClockInstance ci;
  ci.family = "janzing";
  ci.circuit = c;
  ci.encoding = enc;
  ci.scale = scale;
  ci.M = cm.M;
  ci.function = f.value_or(FunctionSpec::monomial(cm.M * cm.M * cm.M));
  ci.function.validate();
  MatrixMeta meta;
  meta.op_norm = scale;
  ci.matrix = detail::emit(cm, enc, scale, meta);
  const index_t s = detail::clock_index(cm, enc, 0, 0);
  ci.target = Target::entry(s, s);
  ci.alpha1_sq = acceptance_probability(c);
  ci.predicted = janzing_prediction(ci.function, cm.M, ci.alpha1_sq, scale);
  ci.formula = ci.function.kind == FunctionSpec::Kind::Monomial && scale == 1.0
                   ? "(1 - 2|a1|^2) E0, E0 = (1/M)(1 + 2 sum_l theta_l^m)"
                   : "(|a0|^2/M)[f(1) + 2 sum_l f(theta_l)] + (|a1|^2/M)[f(-1) + 2 sum_l f(-theta_l)]";
  ci.g = 0.0;
  ci.eps = 1.0 / (4.0 * cm.M);
  return ci;
}

/// Exact rational of a finite double.
inline boost::multiprecision::cpp_rational exact_rational(double x) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (!std::isfinite(x)) throw PreconditionError("non-finite coefficient");
  if (x == 0.0) return 0;
  int e = 0;
  const double mant = std::frexp(x, &e);
  const auto m = static_cast<long long>(std::ldexp(mant, 53));
  e -= 53;
  cpp_rational r = cpp_int(m);
  if (e > 0) r *= cpp_rational(cpp_int(1) << e);
  else if (e < 0) r /= cpp_rational(cpp_int(1) << -e);
  return r;
}

/// (1/M) sum_{l=0}^{M-1} cos^k(2 pi l/M) = 2^{-k} sum_{j : M | 2j-k} C(k, j), exactly.
inline boost::multiprecision::cpp_rational cosine_power_mean(long long k, int M) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  cpp_int binom = 1, acc = 0;
  for (long long j = 0; j <= k; ++j) {
    if (j > 0) binom = binom * (k - j + 1) / j;
    if ((2 * j - k) % M == 0) acc += binom;
  }
  return cpp_rational(acc) / cpp_rational(cpp_int(1) << k);
}

/// (1/M)|f_o(1) + 2 sum_{l=1}^{(M-1)/2} f_o(theta_l)| for the odd part f_o of
/// a real polynomial, in exact rational arithmetic.
inline boost::multiprecision::cpp_rational hardness_criterion_exact(const PolynomialSpec& p, int M) {
  if (M < 3 || M % 2 == 0) throw PreconditionError("hardness_criterion: M must be odd and >= 3");
  boost::multiprecision::cpp_rational s = 0;
  for (int k = 1; k <= p.degree(); k += 2) {
    if (p.coefficients[k].imag() != 0.0) throw PreconditionError("hardness_criterion: real coefficients required");
    if (p.coefficients[k].real() == 0.0) continue;
    s += exact_rational(p.coefficients[k].real()) * cosine_power_mean(k, M);
  }
  return s < 0 ? boost::multiprecision::cpp_rational(-s) : s;
}

inline double hardness_criterion(const PolynomialSpec& p, int M) {
  return static_cast<double>(hardness_criterion_exact(p, M));
}

/// Distribution after m steps of the lazy walk (stay 1/2, move 1/4 each way)
/// on the M-cycle, started at 0.
inline std::vector<double> walk_distribution(int M, long long m) {
  if (M < 3) throw PreconditionError("walk: M must be >= 3");
  std::vector<double> p(M, 0.0), q(M);
  p[0] = 1.0;
  for (long long s = 0; s < m; ++s) {
    for (int l = 0; l < M; ++l) q[l] = 0.5 * p[l] + 0.25 * (p[(l + M - 1) % M] + p[(l + 1) % M]);
    std::swap(p, q);
  }
  return p;
}

/// ||p_m - u||_1 for the lazy cycle walk.
inline double walk_mixing_distance(int M, long long m) {
  const auto p = walk_distribution(M, m);
  double s = 0.0;
  for (double x : p) s += std::abs(x - 1.0 / M);
  return s;
}

inline double walk_mixing_bound(int M, long long m) {
  return 0.5 * std::exp(-kPi * kPi / 2.0 * static_cast<double>(m) / (static_cast<double>(M) * M));
}

/// Lazy walk clock over U_1..U_T, CNOT, (T+1) identities, CNOT, U_T..U_1 on
/// [flag][r qubits], M = 3(T+1).
inline ClockMatrix walk_lm_clock(const Circuit& c) {
  c.validate();
  const int T = c.T();
  ClockMatrix cm;
  cm.M = 3 * (T + 1);
  cm.rd = c.r + 1;
  cm.diag = 0.5;
  const auto g = detail::shifted_gates(c);
  std::vector<StepOp> seq;
  for (const auto& x : g) seq.push_back(StepOp::of(x));
  seq.push_back(StepOp::of(Gate::cnot(1, 0)));
  for (int k = 0; k <= T; ++k) seq.push_back(StepOp::identity());
  seq.push_back(StepOp::of(Gate::cnot(1, 0)));
  for (auto it = g.rbegin(); it != g.rend(); ++it) seq.push_back(StepOp::of(*it));
  for (int l = 0; l < cm.M; ++l) cm.transitions.push_back({l, (l + 1) % cm.M, 0.25, seq[l]});
  return cm;
}

inline ClockInstance monomial_walk_lm_instance(const Circuit& c, Encoding enc = Encoding::Compact) {
  const ClockMatrix cm = walk_lm_clock(c);
  const int T = c.T(), M = cm.M;
  // Smallest c >= 1 with (1/2) exp(-pi^2 c / 2) <= 1e-2.
  const double cmix = std::max(1.0, 2.0 * std::log(50.0) / (kPi * kPi));
  const long long m = static_cast<long long>(std::ceil(cmix * M * M));
  ClockInstance ci;
  ci.family = "walk-lm";
  ci.circuit = c;
  ci.encoding = enc;
  ci.M = M;
  ci.function = FunctionSpec::monomial(static_cast<int>(m));
  MatrixMeta meta;
  meta.op_norm = 1.0;
  ci.matrix = detail::emit(cm, enc, 1.0, meta);
  ci.target = Target::lm(detail::clock_index(cm, enc, index_t{1} << c.r, 0));
  ci.alpha1_sq = acceptance_probability(c);
  const auto p = walk_distribution(M, m);
  double acc = 0.0, all = 0.0;
  for (int l = 0; l < M; ++l) {
    all += p[l] * p[l];
    if (l >= T + 1 && l <= 2 * T + 2) acc += p[l] * p[l];
  }
  ci.predicted = ci.alpha1_sq * acc;
  ci.predicted_normalized = ci.alpha1_sq * acc / all;
  ci.norm = std::sqrt(all);
  ci.formula = "|a1|^2 sum_{T+1<=l<=2T+2} p_m(l)^2";
  ci.g = acc / 2;
  ci.eps = acc / 6;
  return ci;
}

/// Unitary walk over U_1..U_T, CNOT, CNOT, U_T..U_1 on [flag][r qubits],
/// M = 2T+2; A = (W + W^dag)/2.
inline ClockMatrix ballistic_clock(const Circuit& c) {
  c.validate();
  ClockMatrix cm;
  cm.M = 2 * c.T() + 2;
  cm.rd = c.r + 1;
  const auto g = detail::shifted_gates(c);
  std::vector<StepOp> seq;
  for (const auto& x : g) seq.push_back(StepOp::of(x));
  seq.push_back(StepOp::of(Gate::cnot(1, 0)));
  seq.push_back(StepOp::of(Gate::cnot(1, 0)));
  for (auto it = g.rbegin(); it != g.rend(); ++it) seq.push_back(StepOp::of(*it));
  for (int l = 0; l < cm.M; ++l) cm.transitions.push_back({l, (l + 1) % cm.M, 0.5, seq[l]});
  return cm;
}

inline ClockInstance chebyshev_ballistic_instance(const Circuit& c, Encoding enc = Encoding::Compact) {
  const ClockMatrix cm = ballistic_clock(c);
  ClockInstance ci;
  ci.family = "cheby-ballistic";
  ci.circuit = c;
  ci.encoding = enc;
  ci.M = cm.M;
  ci.function = FunctionSpec::chebyshev(c.T() + 1);
  MatrixMeta meta;
  meta.op_norm = 1.0;
  ci.matrix = detail::emit(cm, enc, 1.0, meta);
  ci.target = Target::lm(detail::clock_index(cm, enc, index_t{1} << c.r, 0));
  ci.alpha1_sq = acceptance_probability(c);
  ci.predicted = ci.alpha1_sq;
  ci.predicted_normalized = ci.alpha1_sq;
  ci.norm = 1.0;
  ci.formula = "|a1|^2";
  ci.g = 0.5;
  ci.eps = 1.0 / 6.0;
  return ci;
}

/// Open chain of tau + 1 clock positions, tau = 2T+1, carrying
/// U_1..U_T, CNOT(output -> ancilla), U_T..U_1 on [ancilla][r qubits], with
/// couplings sqrt(j(tau+1-j))/(4 tau).
inline ClockMatrix peres_clock(const Circuit& c) {
  c.validate();
  const int tau = 2 * c.T() + 1;
  ClockMatrix cm;
  cm.M = tau + 1;
  cm.rd = c.r + 1;
  const auto g = detail::shifted_gates(c);
  std::vector<StepOp> seq;
  for (const auto& x : g) seq.push_back(StepOp::of(x));
  seq.push_back(StepOp::of(Gate::cnot(1, 0)));
  for (auto it = g.rbegin(); it != g.rend(); ++it) seq.push_back(StepOp::of(*it));
  for (int j = 1; j <= tau; ++j)
    cm.transitions.push_back({j - 1, j, std::sqrt(static_cast<double>(j) * (tau + 1 - j)) / (4.0 * tau), seq[j - 1]});
  return cm;
}

/// Amplitude of e^{-itA} on the start step: cos(t/(4 tau))^tau.
inline cplx peres_c0(int tau, double t) { return std::pow(std::cos(t / (4.0 * tau)), tau); }

/// Amplitude of e^{-itA} on the final step: (-i sin(t/(4 tau)))^tau.
inline cplx peres_ctau(int tau, double t) { return std::pow(cplx(0.0, -std::sin(t / (4.0 * tau))), tau); }

/// <step_tau, 1, 0| e^{-i 2 pi tau A} |step_0, 0, 0>, evaluated as e^{i (scale A) t}
/// with t = -2 pi tau / scale.
inline ClockInstance peres_timeevo_instance(const Circuit& c, double scale = 1.0, Encoding enc = Encoding::Compact) {
  detail::check_scale(scale);
  const ClockMatrix cm = peres_clock(c);
  const int tau = cm.M - 1;
  ClockInstance ci;
  ci.family = "peres";
  ci.circuit = c;
  ci.encoding = enc;
  ci.scale = scale;
  ci.M = cm.M;
  ci.function = FunctionSpec::timeevo(-2.0 * kPi * tau / scale, 1e-2);
  MatrixMeta meta;
  meta.op_norm = scale / 4.0;
  ci.matrix = detail::emit(cm, enc, scale, meta);
  ci.target = Target::entry(detail::clock_index(cm, enc, index_t{1} << c.r, tau), detail::clock_index(cm, enc, 0, 0));
  ci.alpha1_sq = acceptance_probability(c);
  ci.predicted = std::pow(cplx(0.0, -1.0), tau) * ci.alpha1_sq;
  ci.norm = 1.0;
  ci.formula = "(-i)^tau |a1|^2";
  ci.g = 0.5;
  ci.eps = 1.0 / 12.0;
  return ci;
}

/// Idling clock U over C then CNOT(output -> flag) on [flag][r qubits]:
/// T' = T+1 gates, T' idle steps, T' uncompute steps, cyclic with M = 3T'.
inline ClockMatrix hhl_clock(const Circuit& c) {
  c.validate();
  const int Tp = c.T() + 1;
  ClockMatrix cm;
  cm.M = 3 * Tp;
  cm.rd = c.r + 1;
  cm.hermitize = false;
  auto g = detail::shifted_gates(c);
  g.push_back(Gate::cnot(1, 0));
  for (int k = 0; k < cm.M; ++k) {
    StepOp v = StepOp::identity();
    if (k < Tp) v = StepOp::of(g[k]);
    else if (k >= 2 * Tp) v = StepOp::of(g[3 * Tp - 1 - k]);
    cm.transitions.push_back({k, (k + 1) % cm.M, 1.0, v});
  }
  return cm;
}

/// Flag-is-zero probability at every clock step of the HHL walk.
inline std::vector<double> hhl_clock_probabilities(const Circuit& c) {
  const ClockMatrix cm = hhl_clock(c);
  std::vector<cplx> s(index_t{1} << cm.rd, 0.0);
  s[index_t{1} << c.r] = 1.0;
  std::vector<double> p;
  for (int k = 0; k < cm.M; ++k) {
    p.push_back(1.0 - acceptance_probability(s));
    if (cm.transitions[k].v.kind == StepOp::Kind::Gate) apply_gate(cm.transitions[k].v.gate, cm.rd, s);
  }
  return p;
}

/// (e^3/(e^3-1)) sqrt((1 - e^{-6})/(1 - e^{-2/T'})).
inline double hhl_inverse_norm(int Tp) {
  const double e3 = std::exp(3.0);
  return e3 / (e3 - 1.0) * std::sqrt((1.0 - std::exp(-6.0)) / (1.0 - std::exp(-2.0 / Tp)));
}

/// A = 1 - e^{-1/T'} U symmetrized as A' = A (x) |0><1| + A^dag (x) |1><0|,
/// the doubling qubit being the least significant bit. Targets the
/// normalized LM of A'^{-1} at the flagged start state.
inline ClockInstance hhl_inverse_instance(const Circuit& c, double scale = 1.0, Encoding enc = Encoding::Compact) {
  detail::check_scale(scale);
  const ClockMatrix cm = hhl_clock(c);
  const int Tp = c.T() + 1;
  const double q = std::exp(-1.0 / Tp);
  ClockInstance ci;
  ci.family = "hhl";
  ci.circuit = c;
  ci.encoding = enc;
  ci.scale = scale;
  ci.M = cm.M;
  MatrixMeta meta;
  meta.op_norm = scale * (1.0 + q);
  meta.kappa = (1.0 + q) / (1.0 - q);
  ci.function = FunctionSpec::inverse(*meta.kappa, 1e-2);
  const index_t start = detail::clock_index(cm, enc, index_t{1} << c.r, 0);
  if (enc == Encoding::Compact) {
    std::map<std::pair<index_t, index_t>, double> acc;
    for (index_t k = 0; k < cm.compact_dim(); ++k) {
      acc[{2 * k, 2 * k + 1}] += scale;
      acc[{2 * k + 1, 2 * k}] += scale;
    }
    for (const auto& [ij, v] : cm.compact_entries()) {
      acc[{2 * ij.first, 2 * ij.second + 1}] -= scale * q * v;
      acc[{2 * ij.second + 1, 2 * ij.first}] -= scale * q * v;
    }
    meta.one_norm = column_norm(acc);
    ci.matrix = MatrixInstance::from_sparse(sparse_from_triplets(2 * cm.compact_dim(), to_triplets(acc), meta));
  } else {
    if (cm.unary_qubits() + 1 > caps().unary_qubits)
      throw CapExceeded("unary clock: " + std::to_string(cm.unary_qubits() + 1) + " qubits exceed cap");
    const int n = cm.unary_qubits();
    const PauliOperator a = PauliOperator::identity(n) - cplx(q) * cm.unary_pauli();
    const PauliOperator op = tensor(a, decompose_projector(0, 1, 1)) + tensor(a.adjoint(), decompose_projector(1, 0, 1));
    ci.matrix = MatrixInstance::from_pauli(PauliAccess(cplx(scale) * op, meta));
  }
  ci.target = Target::nlm(2 * start);
  ci.alpha1_sq = acceptance_probability(c);
  const auto p = hhl_clock_probabilities(c);
  double num = 0.0, den = 0.0;
  for (int k = 0; k < cm.M; ++k) {
    const double w = std::exp(-2.0 * k / Tp);
    num += w * p[k];
    den += w;
  }
  const double e3 = std::exp(3.0), pre = e3 / (e3 - 1.0);
  ci.predicted = pre * pre * num / (scale * scale);
  ci.predicted_normalized = num / den;
  ci.norm = hhl_inverse_norm(Tp) / scale;
  ci.formula = "sum_k e^{-2k/T'} P_k(flag = 0) / sum_k e^{-2k/T'}";
  double idle = 0.0;
  for (int k = Tp; k <= 2 * Tp; ++k) idle += std::exp(-2.0 * k / Tp);
  ci.g = idle / den / 2;
  ci.eps = idle / den / 6;
  return ci;
}

/// Everything needed to regenerate an instance bit-identically.
struct FamilySpec {
  std::string family;
  Circuit circuit;
  Encoding encoding = Encoding::Compact;
  double scale = 1.0;
  std::optional<FunctionSpec> function;  // janzing only
};

inline ClockInstance generate(const FamilySpec& f) {
  if (f.family == "janzing") return janzing_entry_instance(f.circuit, f.function, f.scale, f.encoding);
  if (f.function) throw PreconditionError("only the janzing family takes a function");
  if (f.family == "walk-lm") return monomial_walk_lm_instance(f.circuit, f.encoding);
  if (f.family == "cheby-ballistic") return chebyshev_ballistic_instance(f.circuit, f.encoding);
  if (f.family == "peres") return peres_timeevo_instance(f.circuit, f.scale, f.encoding);
  if (f.family == "hhl") return hhl_inverse_instance(f.circuit, f.scale, f.encoding);
  throw PreconditionError("unknown family: " + f.family);
}

}  // namespace matfunc

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
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "matfunc/access.hpp"
#include "matfunc/circuit.hpp"
#include "matfunc/clock.hpp"
#include "matfunc/estimate.hpp"
#include "matfunc/pauli.hpp"
#include "matfunc/polynomial.hpp"
#include "matfunc/router.hpp"

namespace matfunc::io {

using json = nlohmann::json;

inline json to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

/// Accepts {"re","im"}, [re, im] or a bare real number.
inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  throw PreconditionError("expected a complex number, got " + j.dump());
}

namespace detail {

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw PreconditionError(std::string("missing JSON field \"") + key + "\"");
  return j.at(key);
}

inline json complex_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline std::vector<cplx> complex_list_from_json(const json& j) {
  std::vector<cplx> v;
  for (const auto& z : j) v.push_back(complex_from_json(z));
  return v;
}

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (j.contains(key) && !j.at(key).is_null()) return j.at(key).get<T>();
  return std::nullopt;
}

}  // namespace detail

// ---- Pauli operators ----

inline json to_json(const PauliOperator& a) {
  json terms = json::array();
  for (const auto& t : a.terms())
    terms.push_back({{"re", t.coef.real()}, {"im", t.coef.imag()}, {"word", t.string.word()}});
  return {{"n", a.n_qubits()}, {"terms", terms}};
}

inline PauliOperator pauli_from_json(const json& j) {
  const int n = detail::require(j, "n").get<int>();
  std::vector<PauliTerm> terms;
  for (const auto& t : detail::require(j, "terms")) {
    const auto word = detail::require(t, "word").get<std::string>();
    if (static_cast<int>(word.size()) != n) throw PreconditionError("Pauli word length differs from n: " + word);
    terms.push_back({complex_from_json(t), PauliString::from_word(word)});
  }
  return PauliOperator(n, std::move(terms));
}

// ---- functions ----

inline json to_json(const FunctionSpec& f) {
  json j{{"kind", function_kind_name(f.kind)}};
  switch (f.kind) {
    case FunctionSpec::Kind::Monomial:
    case FunctionSpec::Kind::Chebyshev:
      j["m"] = f.m;
      break;
    case FunctionSpec::Kind::Inverse:
      j["kappa"] = f.kappa;
      j["eps"] = f.eps;
      break;
    case FunctionSpec::Kind::TimeEvolution:
      j["t"] = f.t;
      j["eps"] = f.eps;
      break;
  }
  return j;
}

inline FunctionSpec::Kind parse_function_kind(const std::string& s) {
  for (auto k : {FunctionSpec::Kind::Monomial, FunctionSpec::Kind::Chebyshev, FunctionSpec::Kind::Inverse,
                 FunctionSpec::Kind::TimeEvolution})
    if (s == function_kind_name(k)) return k;
  throw PreconditionError("unknown function kind: " + s);
}

inline FunctionSpec function_from_json(const json& j) {
  FunctionSpec f;
  f.kind = parse_function_kind(detail::require(j, "kind").get<std::string>());
  f.m = j.value("m", f.m);
  f.t = j.value("t", f.t);
  f.kappa = j.value("kappa", f.kappa);
  f.eps = j.value("eps", f.eps);
  f.validate();
  return f;
}

inline json to_json(const PolynomialSpec& p) {
  json j{{"coefficients", detail::complex_list(p.coefficients)}};
  if (p.has_chebyshev()) j["chebyshev"] = detail::complex_list(p.chebyshev);
  if (p.certified_error != 0.0) j["certified_error"] = p.certified_error;
  return j;
}

inline PolynomialSpec polynomial_from_json(const json& j) {
  PolynomialSpec p = PolynomialSpec::from_coefficients(detail::complex_list_from_json(detail::require(j, "coefficients")));
  if (j.contains("chebyshev")) p.chebyshev = detail::complex_list_from_json(j.at("chebyshev"));
  p.certified_error = j.value("certified_error", 0.0);
  return p;
}

inline json to_json(const FunctionArg& f) {
  return std::visit([](const auto& x) { return to_json(x); }, f);
}

inline FunctionArg function_arg_from_json(const json& j) {
  if (j.contains("coefficients")) return polynomial_from_json(j);
  return function_from_json(j);
}

/// JSON text, or the short forms monomial:m, chebyshev:m, inverse:kappa,eps
/// and timeevo:t,eps.
inline FunctionArg parse_function_arg(const std::string& s) {
  if (!s.empty() && s.front() == '{') return function_arg_from_json(json::parse(s));
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw PreconditionError("bad function: " + s);
  FunctionSpec f;
  f.kind = parse_function_kind(s.substr(0, colon));
  std::vector<double> args;
  std::stringstream ss(s.substr(colon + 1));
  for (std::string tok; std::getline(ss, tok, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != tok.size()) throw PreconditionError("bad function argument: " + tok);
    args.push_back(v);
  }
  const bool degree = f.kind == FunctionSpec::Kind::Monomial || f.kind == FunctionSpec::Kind::Chebyshev;
  if (args.size() != (degree ? 1u : 2u)) throw PreconditionError("wrong argument count in function: " + s);
  if (degree) {
    if (args[0] != std::floor(args[0])) throw PreconditionError("degree must be an integer: " + s);
    f.m = static_cast<int>(args[0]);
  } else if (f.kind == FunctionSpec::Kind::Inverse) {
    f.kappa = args[0];
    f.eps = args[1];
  } else {
    f.t = args[0];
    f.eps = args[1];
  }
  f.validate();
  return f;
}

// ---- targets and estimates ----

inline std::string to_string(const Target& t) {
  switch (t.kind) {
    case Target::Kind::Entry: return "entry:" + std::to_string(t.i) + "," + std::to_string(t.j);
    case Target::Kind::LM: return "lm:" + std::to_string(t.i);
    case Target::Kind::NLM: return "nlm:" + std::to_string(t.i);
  }
  return "?";
}

/// entry:i,j | lm:i | nlm:i
inline Target parse_target(const std::string& s) {
  auto index = [&](const std::string& x) -> index_t {
    if (x.empty() || x.find_first_not_of("0123456789") != std::string::npos)
      throw PreconditionError("bad target index in " + s);
    return std::stoull(x);
  };
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw PreconditionError("bad target: " + s);
  const std::string kind = s.substr(0, colon), rest = s.substr(colon + 1);
  if (kind == "entry") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw PreconditionError("entry target needs i,j: " + s);
    return Target::entry(index(rest.substr(0, comma)), index(rest.substr(comma + 1)));
  }
  if (kind == "lm") return Target::lm(index(rest));
  if (kind == "nlm") return Target::nlm(index(rest));
  throw PreconditionError("bad target kind: " + s);
}

inline Decision parse_decision(const std::string& s) {
  for (auto d : {Decision::Yes, Decision::No, Decision::Undecided})
    if (s == decision_name(d)) return d;
  throw PreconditionError("bad decision: " + s);
}

/// Wall time is left out so that equal requests serialize identically.
inline json to_json(const Estimate& e) {
  json j{{"value", to_json(e.value)}, {"half_width", e.half_width}, {"samples", e.samples}, {"algorithm", e.algorithm}};
  if (e.decision) j["decision"] = decision_name(*e.decision);
  return j;
}

inline Estimate estimate_from_json(const json& j) {
  Estimate e;
  e.value = complex_from_json(detail::require(j, "value"));
  e.half_width = detail::require(j, "half_width").get<double>();
  e.samples = j.value("samples", std::uint64_t{0});
  e.algorithm = j.value("algorithm", std::string());
  if (j.contains("decision")) e.decision = parse_decision(j.at("decision").get<std::string>());
  return e;
}

// ---- circuits and families ----

inline json to_json(const Gate& g) {
  json q = json::array();
  for (int x : g.qubits()) q.push_back(x);
  return {{"gate", gate_name(g.kind)}, {"qubits", q}};
}

inline Gate gate_from_json(const json& j) {
  const auto name = detail::require(j, "gate").get<std::string>();
  const auto q = detail::require(j, "qubits").get<std::vector<int>>();
  auto arity = [&](std::size_t n) {
    if (q.size() != n) throw PreconditionError(name + " takes " + std::to_string(n) + " qubit(s)");
  };
  if (name == "H") return arity(1), Gate::h(q[0]);
  if (name == "X") return arity(1), Gate::x(q[0]);
  if (name == "CNOT") return arity(2), Gate::cnot(q[0], q[1]);
  if (name == "Toffoli") return arity(3), Gate::toffoli(q[0], q[1], q[2]);
  throw PreconditionError("unknown gate: " + name);
}

inline json to_json(const Circuit& c) {
  json g = json::array();
  for (const auto& x : c.gates) g.push_back(to_json(x));
  return {{"r", c.r}, {"gates", g}};
}

/// {"r": int, "gates": [...]}, or a bare gate list on max qubit + 1 qubits.
inline Circuit circuit_from_json(const json& j) {
  Circuit c;
  const json& gates = j.is_array() ? j : detail::require(j, "gates");
  for (const auto& g : gates) c.gates.push_back(gate_from_json(g));
  if (j.is_array()) {
    c.r = 1;
    for (const auto& g : c.gates)
      for (int q : g.qubits()) c.r = std::max(c.r, q + 1);
  } else {
    c.r = detail::require(j, "r").get<int>();
  }
  c.validate();
  return c;
}

inline json to_json(const FamilySpec& f) {
  json j{{"family", f.family}, {"circuit", to_json(f.circuit)}, {"encoding", encoding_name(f.encoding)},
         {"scale", f.scale}};
  if (f.function) j["function"] = to_json(*f.function);
  return j;
}

inline FamilySpec family_from_json(const json& j) {
  FamilySpec f;
  f.family = detail::require(j, "family").get<std::string>();
  f.circuit = circuit_from_json(detail::require(j, "circuit"));
  f.encoding = parse_encoding(j.value("encoding", std::string("compact")));
  f.scale = j.value("scale", 1.0);
  if (j.contains("function")) f.function = function_from_json(j.at("function"));
  return f;
}

// ---- instance envelope ----

/// Row sparsity reported in the envelope metadata.
inline int declared_sparsity(const MatrixInstance& m) {
  if (m.sparse) return m.sparse->sparsity;
  if (m.pauli) return static_cast<int>(m.pauli->op().size());
  if (m.supersparse) {
    std::map<index_t, int> rows;
    int s = 0;
    for (const auto& e : m.supersparse->entries()) s = std::max(s, ++rows[e.i]);
    return s;
  }
  return static_cast<int>(m.dim);
}

inline json to_json(const MatrixMeta& meta, int s) {
  json j{{"s", s}};
  detail::put_optional(j, "one_norm", meta.one_norm);
  detail::put_optional(j, "pauli_norm", meta.pauli_norm);
  detail::put_optional(j, "op_norm", meta.op_norm);
  detail::put_optional(j, "kappa", meta.kappa);
  detail::put_optional(j, "eta", meta.eta);
  return j;
}

inline MatrixMeta meta_from_json(const json& j) {
  MatrixMeta m;
  m.one_norm = detail::get_optional<double>(j, "one_norm");
  m.pauli_norm = detail::get_optional<double>(j, "pauli_norm");
  m.op_norm = detail::get_optional<double>(j, "op_norm");
  m.kappa = detail::get_optional<double>(j, "kappa");
  m.eta = detail::get_optional<double>(j, "eta");
  return m;
}

/// What a generated instance is expected to produce.
struct Reference {
  FunctionArg function = FunctionSpec::monomial(1);
  Target target;
  cplx predicted = 0.0;
  std::optional<double> predicted_normalized;
  std::optional<double> norm;
  std::string formula;
  double alpha1_sq = 0.0;
  double g = 0.0;
  double eps = 0.0;
  int M = 0;

  static Reference of(const ClockInstance& ci) {
    return {ci.function, ci.target, ci.predicted, ci.predicted_normalized, ci.norm, ci.formula,
            ci.alpha1_sq, ci.g, ci.eps, ci.M};
  }

  /// The prediction that applies to the target: the normalized one for
  /// normalized LM when available.
  cplx expected() const {
    if (target.kind == Target::Kind::NLM && predicted_normalized) return *predicted_normalized;
    return predicted;
  }
};

inline json to_json(const Reference& r) {
  json j{{"function", to_json(r.function)}, {"target", to_string(r.target)}, {"predicted", to_json(r.predicted)},
         {"formula", r.formula}, {"alpha1_sq", r.alpha1_sq}, {"g", r.g}, {"eps", r.eps}, {"M", r.M}};
  detail::put_optional(j, "predicted_normalized", r.predicted_normalized);
  detail::put_optional(j, "norm", r.norm);
  return j;
}

inline Reference reference_from_json(const json& j) {
  Reference r;
  r.function = function_arg_from_json(detail::require(j, "function"));
  r.target = parse_target(detail::require(j, "target").get<std::string>());
  r.predicted = complex_from_json(detail::require(j, "predicted"));
  r.predicted_normalized = detail::get_optional<double>(j, "predicted_normalized");
  r.norm = detail::get_optional<double>(j, "norm");
  r.formula = j.value("formula", std::string());
  r.alpha1_sq = j.value("alpha1_sq", 0.0);
  r.g = j.value("g", 0.0);
  r.eps = j.value("eps", 0.0);
  r.M = j.value("M", 0);
  return r;
}

/// A matrix plus, for generated instances, the family and its reference.
struct InstanceDoc {
  MatrixInstance matrix;
  std::optional<FamilySpec> family;
  std::optional<Reference> reference;

  static InstanceDoc generated(const FamilySpec& f) {
    const ClockInstance ci = generate(f);
    return {ci.matrix, f, Reference::of(ci)};
  }
};

/// Sparse oracles carry callables, so they serialize only by naming the
/// generating family; regeneration is deterministic.
inline json to_json(const InstanceDoc& doc) {
  const MatrixInstance& m = doc.matrix;
  json payload;
  if (m.supersparse) {
    payload = json::array();
    for (const auto& e : m.supersparse->entries())
      payload.push_back({{"i", e.i}, {"j", e.j}, {"re", e.v.real()}, {"im", e.v.imag()}});
  } else if (m.pauli) {
    payload = to_json(m.pauli->op());
  } else if (m.sparse) {
    if (!doc.family) throw PreconditionError("sparse oracles serialize only through a generating family");
    payload = {{"family", to_json(*doc.family)}};
  } else if (m.dense) {
    payload = json::array();
    for (std::size_t i = 0; i < m.dim; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < m.dim; ++k) row.push_back(json::array({(*m.dense)(i, k).real(), (*m.dense)(i, k).imag()}));
      payload.push_back(row);
    }
  } else {
    throw PreconditionError("instance has no access model");
  }
  json j{{"model", m.model()}, {"N", m.dim}, {"payload", payload}, {"meta", to_json(m.meta, declared_sparsity(m))}};
  if (doc.family) j["family"] = to_json(*doc.family);
  if (doc.reference) j["reference"] = to_json(*doc.reference);
  return j;
}

inline InstanceDoc instance_from_json(const json& j) {
  InstanceDoc doc;
  const auto model = detail::require(j, "model").get<std::string>();
  const auto N = detail::require(j, "N").get<index_t>();
  const json& payload = detail::require(j, "payload");
  const MatrixMeta meta = j.contains("meta") ? meta_from_json(j.at("meta")) : MatrixMeta{};
  if (j.contains("family")) doc.family = family_from_json(j.at("family"));
  if (j.contains("reference")) doc.reference = reference_from_json(j.at("reference"));
  if (model == "supersparse") {
    std::vector<SuperSparseMatrix::Entry> entries;
    for (const auto& e : payload)
      entries.push_back({detail::require(e, "i").get<index_t>(), detail::require(e, "j").get<index_t>(),
                         complex_from_json(e)});
    doc.matrix = MatrixInstance::from_supersparse(SuperSparseMatrix(N, std::move(entries), meta));
  } else if (model == "pauli") {
    doc.matrix = MatrixInstance::from_pauli(PauliAccess(pauli_from_json(payload), meta));
  } else if (model == "sparse") {
    const FamilySpec f = family_from_json(detail::require(payload, "family"));
    doc.matrix = generate(f).matrix;
    if (!doc.family) doc.family = f;
  } else if (model == "dense") {
    if (payload.size() != N) throw PreconditionError("dense payload row count differs from N");
    DenseMatrix d(N);
    for (std::size_t i = 0; i < N; ++i) {
      if (payload[i].size() != N) throw PreconditionError("dense payload row length differs from N");
      for (std::size_t k = 0; k < N; ++k) d(i, k) = complex_from_json(payload[i][k]);
    }
    doc.matrix = MatrixInstance::from_dense(std::move(d), meta);
  } else {
    throw PreconditionError("unknown model: " + model);
  }
  if (doc.matrix.dim != N) throw PreconditionError("payload dimension differs from N");
  return doc;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

}  // namespace matfunc::io

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


// matfunc: generate clock instances, route and run estimators, check them
// against the dense oracle, and sweep parameters.

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matfunc/matfunc.hpp"

namespace {

using matfunc::io::json;
namespace io = matfunc::io;

enum ExitCode { kOk = 0, kVerifyFail = 1, kUsage = 2, kHardRegime = 3, kOracleUnavailable = 4 };

// Reference predictions are closed forms; the oracle must reproduce them to this.
constexpr double kPredictedTol = 1e-6;
// Slack on top of an estimator's own half-width when comparing to the oracle.
constexpr double kEstimateSlack = 1e-9;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string instance, family, circuit, encoding = "compact", target, function, algorithm = "auto";
  std::string format = "json", out, sweep;
  double eps = 1e-2, delta = 1e-2, scale = 1.0;
  std::optional<double> g;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

// Shortest text that reads back to the same double.
std::string num(double x) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

bool looks_inline(const std::string& s) { return !s.empty() && (s.front() == '{' || s.front() == '['); }

json inline_or_file(const std::string& s) {
  if (looks_inline(s)) return json::parse(s);
  return io::read_json_file(s);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text << '\n';
}

matfunc::FamilySpec family_spec(const Options& o) {
  if (looks_inline(o.family)) return io::family_from_json(json::parse(o.family));
  if (o.circuit.empty()) throw UsageError("--family needs --circuit");
  matfunc::FamilySpec f;
  f.family = o.family;
  f.circuit = io::circuit_from_json(inline_or_file(o.circuit));
  f.encoding = matfunc::parse_encoding(o.encoding);
  f.scale = o.scale;
  // Only janzing instances are built around a chosen function.
  if (!o.function.empty() && f.family == "janzing") {
    const auto fn = io::parse_function_arg(o.function);
    if (!std::holds_alternative<matfunc::FunctionSpec>(fn)) throw UsageError("family functions must be a kind, not coefficients");
    f.function = std::get<matfunc::FunctionSpec>(fn);
  }
  return f;
}

io::InstanceDoc load_instance(const Options& o) {
  if (!o.instance.empty() && !o.family.empty()) throw UsageError("give --instance or --family, not both");
  if (!o.instance.empty()) return io::instance_from_json(inline_or_file(o.instance));
  if (!o.family.empty()) return io::InstanceDoc::generated(family_spec(o));
  throw UsageError("--instance or --family is required");
}

matfunc::EstimateRequest build_request(const Options& o, const io::InstanceDoc& doc) {
  matfunc::EstimateRequest r;
  if (!o.target.empty()) r.target = io::parse_target(o.target);
  else if (doc.reference) r.target = doc.reference->target;
  else throw UsageError("--target is required for this instance");
  // A family's own function is the default. For janzing, --function already
  // chose the generator's function; elsewhere it overrides the request.
  const bool generator_fn = !o.family.empty() && doc.family && doc.family->family == "janzing";
  if (!o.function.empty() && !generator_fn) r.function = io::parse_function_arg(o.function);
  else if (doc.reference) r.function = doc.reference->function;
  else throw UsageError("--function is required for this instance");
  if (r.target.i >= doc.matrix.dim || r.target.j >= doc.matrix.dim)
    throw UsageError("target index out of range for N = " + std::to_string(doc.matrix.dim));
  r.eps = o.eps;
  r.delta = o.delta;
  r.g = o.g;
  r.seed = o.seed.value_or(0);
  r.algorithm = matfunc::parse_algorithm(o.algorithm);
  r.workers = o.workers;
  r.validate();
  return r;
}

/// Routes and insists on an explicit seed for stochastic algorithms.
matfunc::Algorithm checked_route(const Options& o, const io::InstanceDoc& doc, const matfunc::EstimateRequest& r) {
  const auto alg = matfunc::route(doc.matrix, r);
  if (!matfunc::is_deterministic(alg) && !o.seed)
    throw UsageError(std::string("--seed is required for the stochastic algorithm ") + matfunc::algorithm_name(alg));
  return alg;
}

std::string estimate_tsv(const matfunc::Estimate& e) {
  return "re\tim\thalf_width\tsamples\talgorithm\tdecision\n" + num(e.value.real()) + "\t" + num(e.value.imag()) +
         "\t" + num(e.half_width) + "\t" + std::to_string(e.samples) + "\t" + e.algorithm + "\t" +
         (e.decision ? matfunc::decision_name(*e.decision) : "");
}

int cmd_gen(const Options& o) {
  if (o.family.empty()) throw UsageError("gen needs --family");
  if (o.format != "json") throw UsageError("gen writes JSON only");
  emit(o, io::to_json(io::InstanceDoc::generated(family_spec(o))).dump(2));
  return kOk;
}

int cmd_estimate(const Options& o) {
  const auto doc = load_instance(o);
  const auto req = build_request(o, doc);
  checked_route(o, doc, req);
  const auto e = matfunc::estimate(doc.matrix, req);
  emit(o, o.format == "tsv" ? estimate_tsv(e) : io::to_json(e).dump());
  return kOk;
}

int cmd_route(const Options& o) {
  const auto doc = load_instance(o);
  const auto req = build_request(o, doc);
  const auto alg = matfunc::route(doc.matrix, req);
  if (o.format == "tsv")
    emit(o, "algorithm\tmodel\n" + std::string(matfunc::algorithm_name(alg)) + "\t" + doc.matrix.model());
  else
    emit(o, json{{"algorithm", matfunc::algorithm_name(alg)}, {"model", doc.matrix.model()}}.dump());
  return kOk;
}

int cmd_verify(const Options& o) {
  const auto doc = load_instance(o);
  const auto req = build_request(o, doc);
  json rep{{"target", io::to_string(req.target)}, {"function", io::to_json(req.function)}, {"model", doc.matrix.model()},
           {"N", doc.matrix.dim}};
  bool pass = true;

  std::optional<matfunc::Estimate> est;
  try {
    checked_route(o, doc, req);
    est = matfunc::estimate(doc.matrix, req);
    rep["estimate"] = io::to_json(*est);
  } catch (const matfunc::HardRegime& e) {
    rep["refused"] = e.row();
  } catch (const matfunc::CapExceeded& e) {
    rep["estimator_error"] = e.what();
  }

  std::optional<matfunc::cplx> oracle;
  if (doc.matrix.dim <= matfunc::caps().dense_dim) {
    try {
      oracle = matfunc::dense_reference(doc.matrix, req.function, req.target);
    } catch (const matfunc::CapExceeded&) {
    }
  }
  rep["oracle_available"] = oracle.has_value();

  // The reference only describes the family's own request.
  std::optional<matfunc::cplx> predicted;
  if (doc.reference && doc.reference->target == req.target && io::to_json(doc.reference->function) == io::to_json(req.function))
    predicted = doc.reference->expected();

  auto check = [&](const char* name, double err, double tol) {
    const bool ok = err <= tol;
    rep["checks"][name] = {{"abs_err", err}, {"tol", tol}, {"pass", ok}};
    pass = pass && ok;
  };
  if (oracle) rep["oracle"] = io::to_json(*oracle);
  if (predicted) rep["predicted"] = io::to_json(*predicted);
  if (est && oracle) check("estimate_vs_oracle", std::abs(est->value - *oracle), est->half_width + kEstimateSlack);
  if (oracle && predicted) check("oracle_vs_predicted", std::abs(*oracle - *predicted), kPredictedTol);
  if (est && predicted && !oracle)
    check("estimate_vs_predicted", std::abs(est->value - *predicted), est->half_width + kPredictedTol);
  rep["pass"] = pass;

  if (o.format == "tsv") {
    std::string t = "check\tabs_err\ttol\tpass\n";
    if (rep.contains("checks"))
      for (const auto& [k, v] : rep["checks"].items())
        t += k + "\t" + num(v["abs_err"].get<double>()) + "\t" + num(v["tol"].get<double>()) + "\t" +
             (v["pass"].get<bool>() ? "pass" : "fail") + "\n";
    t += std::string("overall\t\t\t") + (pass ? "pass" : "fail");
    emit(o, t);
  } else {
    emit(o, rep.dump(2));
  }
  if (!pass) return kVerifyFail;
  return oracle ? kOk : kOracleUnavailable;
}

// ---- bench ----

json builtin_sweep(const std::string& name) {
  json rows = json::array();
  if (name == "lambda") {
    // Samples for mc_pauli grow as lambda^{2m}.
    for (double lam : {0.5, 0.75, 1.0, 1.25, 1.5}) {
      const matfunc::PauliOperator a(3, {{0.5 * lam, matfunc::PauliString::from_word("ZII")},
                                         {0.5 * lam, matfunc::PauliString::from_word("XXI")}});
      const io::InstanceDoc doc{matfunc::MatrixInstance::from_pauli(matfunc::PauliAccess(a)), std::nullopt, std::nullopt};
      rows.push_back({{"label", "lambda=" + num(lam)}, {"instance", io::to_json(doc)},
                      {"function", io::to_json(matfunc::FunctionSpec::monomial(3))}, {"target", "entry:0,0"},
                      {"algorithm", "mc_pauli"}, {"eps", 0.05}, {"delta", 0.05}, {"seeds", {1, 2}}});
    }
  } else if (name == "degree") {
    // Exact path work grows as s^m.
    const matfunc::PauliOperator a(4, {{0.3, matfunc::PauliString::from_word("XIII")},
                                       {0.3, matfunc::PauliString::from_word("IXZI")},
                                       {0.3, matfunc::PauliString::from_word("IIXX")}});
    const io::InstanceDoc doc{matfunc::MatrixInstance::from_pauli(matfunc::PauliAccess(a)), std::nullopt, std::nullopt};
    for (int m = 1; m <= 10; ++m)
      rows.push_back({{"label", "m=" + std::to_string(m)}, {"instance", io::to_json(doc)},
                      {"function", io::to_json(matfunc::FunctionSpec::monomial(m))}, {"target", "entry:0,0"},
                      {"algorithm", "exact_path"}, {"seeds", {0}}});
  } else {
    return inline_or_file(name);
  }
  return rows;
}

int cmd_bench(const Options& o) {
  if (o.sweep.empty()) throw UsageError("bench needs --sweep lambda|degree|<file or JSON>");
  const json rows = builtin_sweep(o.sweep);
  if (!rows.is_array()) throw UsageError("a sweep is a JSON array of rows");
  std::string t = "label\tmodel\tN\talgorithm\tseed\tfunction\ttarget\teps\tsamples\twall_time\tre\tim\thalf_width\terror";
  for (const auto& row : rows) {
    io::InstanceDoc doc;
    if (row.contains("instance"))
      doc = io::instance_from_json(row["instance"].is_string() ? io::read_json_file(row["instance"]) : row["instance"]);
    else
      doc = io::InstanceDoc::generated(io::family_from_json(row.at("family")));
    matfunc::EstimateRequest req;
    req.function = row.contains("function") ? io::function_arg_from_json(row["function"])
                                            : doc.reference.value().function;
    req.target = row.contains("target") ? io::parse_target(row["target"]) : doc.reference.value().target;
    req.eps = row.value("eps", o.eps);
    req.delta = row.value("delta", o.delta);
    req.algorithm = matfunc::parse_algorithm(row.value("algorithm", std::string("auto")));
    req.workers = o.workers;
    std::optional<matfunc::cplx> oracle;
    if (doc.matrix.dim <= matfunc::caps().dense_dim) oracle = matfunc::dense_reference(doc.matrix, req.function, req.target);
    const auto seeds = row.value("seeds", std::vector<std::uint64_t>{o.seed.value_or(0)});
    for (const auto seed : seeds) {
      req.seed = seed;
      const auto e = matfunc::estimate(doc.matrix, req);
      t += "\n" + row.value("label", std::string()) + "\t" + doc.matrix.model() + "\t" + std::to_string(doc.matrix.dim) +
           "\t" + e.algorithm + "\t" + std::to_string(seed) + "\t" + io::to_json(req.function).dump() + "\t" +
           io::to_string(req.target) + "\t" + num(req.eps) + "\t" + std::to_string(e.samples) + "\t" +
           num(e.wall_time) + "\t" + num(e.value.real()) + "\t" + num(e.value.imag()) + "\t" + num(e.half_width) +
           "\t" + (oracle ? num(std::abs(e.value - *oracle)) : "nan");
    }
  }
  emit(o, t);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matfunc: matrix-function estimation and clock-construction instances"};
  app.require_subcommand(1, 1);
  Options o;

  auto common = [&](CLI::App* c, bool request) {
    c->add_option("--instance", o.instance, "instance envelope (path or inline JSON)");
    c->add_option("--family", o.family, "family name (janzing, walk-lm, cheby-ballistic, peres, hhl) or family JSON");
    c->add_option("--circuit", o.circuit, "gate list JSON (path or inline)");
    c->add_option("--encoding", o.encoding, "clock encoding")->check(CLI::IsMember({"compact", "unary"}));
    c->add_option("--scale", o.scale, "matrix scale in (0,1]");
    c->add_option("--function", o.function, "monomial:m | chebyshev:m | inverse:kappa,eps | timeevo:t,eps | JSON");
    c->add_option("--out", o.out, "output path (default stdout)");
    c->add_option("--format", o.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    c->add_option("--workers", o.workers, "sampling threads")->check(CLI::PositiveNumber);
    c->add_option("--seed", o.seed, "RNG seed");
    if (!request) return;
    c->add_option("--target", o.target, "entry:i,j | lm:i | nlm:i");
    c->add_option("--eps", o.eps, "additive error")->check(CLI::PositiveNumber);
    c->add_option("--delta", o.delta, "failure probability")->check(CLI::Range(0.0, 1.0));
    c->add_option("--g", o.g, "decision threshold");
    c->add_option("--algorithm", o.algorithm, "auto or a forced algorithm");
  };

  auto* gen = app.add_subcommand("gen", "write a generated instance with its predicted value");
  common(gen, false);
  auto* est = app.add_subcommand("estimate", "route and run an estimator");
  common(est, true);
  auto* ver = app.add_subcommand("verify", "compare estimate, dense oracle and prediction");
  common(ver, true);
  auto* rte = app.add_subcommand("route", "print the algorithm the router selects");
  common(rte, true);
  auto* ben = app.add_subcommand("bench", "TSV sweep of samples, wall time and error");
  common(ben, true);
  ben->add_option("--sweep", o.sweep, "lambda, degree, or a sweep JSON (path or inline)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*est) return cmd_estimate(o);
    if (*ver) return cmd_verify(o);
    if (*rte) return cmd_route(o);
    if (*ben) return cmd_bench(o);
  } catch (const matfunc::HardRegime& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kHardRegime;
  } catch (const matfunc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "bad JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const std::bad_optional_access&) {
    std::cerr << "usage: sweep row needs function and target\n";
    return kUsage;
  }
  return kUsage;
}

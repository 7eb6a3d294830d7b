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

#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "matfunc/core.hpp"
#include "matfunc/polynomial.hpp"
#include "matfunc/random.hpp"

namespace matfunc {

enum class Algorithm { Auto, ExactPath, McSparse, McPauli, SupersparseCb, SupersparsePauli, Sketch, NormDecay };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Auto: return "auto";
    case Algorithm::ExactPath: return "exact_path";
    case Algorithm::McSparse: return "mc_sparse";
    case Algorithm::McPauli: return "mc_pauli";
    case Algorithm::SupersparseCb: return "supersparse_cb";
    case Algorithm::SupersparsePauli: return "supersparse_pauli";
    case Algorithm::Sketch: return "sketch";
    case Algorithm::NormDecay: return "norm_decay";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::Auto, Algorithm::ExactPath, Algorithm::McSparse, Algorithm::McPauli,
                      Algorithm::SupersparseCb, Algorithm::SupersparsePauli, Algorithm::Sketch, Algorithm::NormDecay})
    if (s == algorithm_name(a)) return a;
  throw PreconditionError("unknown algorithm: " + s);
}

inline bool is_deterministic(Algorithm a) {
  return a == Algorithm::ExactPath || a == Algorithm::SupersparseCb || a == Algorithm::SupersparsePauli;
}

/// Entry <i|f|j>, local measurement <i|f^dag pi f|i>, or its normalized form.
struct Target {
  enum class Kind { Entry, LM, NLM };
  Kind kind = Kind::Entry;
  index_t i = 0;
  index_t j = 0;

  static Target entry(index_t i, index_t j) { return {Kind::Entry, i, j}; }
  static Target lm(index_t i) { return {Kind::LM, i, i}; }
  static Target nlm(index_t i) { return {Kind::NLM, i, i}; }
  friend bool operator==(const Target&, const Target&) = default;
};

enum class Decision { Yes, No, Undecided };

inline const char* decision_name(Decision d) {
  switch (d) {
    case Decision::Yes: return "yes";
    case Decision::No: return "no";
    case Decision::Undecided: return "undecided";
  }
  return "?";
}

struct EstimateRequest {
  Target target;
  std::variant<FunctionSpec, PolynomialSpec> function = FunctionSpec::monomial(1);
  double eps = 1e-2;
  double delta = 1e-2;
  std::optional<double> g;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::Auto;
  unsigned workers = 1;

  void validate() const {
    if (!(eps > 0)) throw PreconditionError("eps must be positive");
    if (!(delta > 0 && delta < 1)) throw PreconditionError("delta must lie in (0,1)");
  }
};

struct Estimate {
  cplx value = 0.0;
  double half_width = 0.0;
  std::uint64_t samples = 0;
  std::string algorithm;
  double wall_time = 0.0;
  std::optional<Decision> decision;
};

/// <i|f^dag pi f|i> and ||f|i>||^2 from one exact evaluation.
struct LmParts {
  double num = 0.0;
  double den = 0.0;

  double normalized() const {
    if (den < 1e-12) throw PreconditionError("normalized LM: ||f(A)|i>||^2 below 1e-12");
    return num / den;
  }
};

/// YES if value - half_width >= g, NO if value + half_width <= g.
inline Decision decide(const Estimate& e, double g) {
  const double v = e.value.real();
  if (v - e.half_width >= g) return Decision::Yes;
  if (v + e.half_width <= g) return Decision::No;
  return Decision::Undecided;
}

/// Samples for a complex mean with |X| <= W: real and imaginary parts each
/// get eps/sqrt2 and delta/2, so n = ceil(4 W^2 ln(4/delta) / eps^2).
inline std::uint64_t hoeffding_complex(double W, double eps, double delta) {
  const double n = std::ceil(4.0 * W * W * std::log(4.0 / delta) / (eps * eps));
  if (!std::isfinite(n) || n > static_cast<double>(caps().max_samples))
    throw CapExceeded("Hoeffding sample count exceeds cap (W = " + std::to_string(W) + ")");
  return static_cast<std::uint64_t>(std::max(1.0, n));
}

/// Samples for a real mean with |X| <= R: n = ceil(2 R^2 ln(2/delta) / eps^2).
inline std::uint64_t hoeffding_real(double R, double eps, double delta) {
  const double n = std::ceil(2.0 * R * R * std::log(2.0 / delta) / (eps * eps));
  if (!std::isfinite(n) || n > static_cast<double>(caps().max_samples))
    throw CapExceeded("Hoeffding sample count exceeds cap (R = " + std::to_string(R) + ")");
  return static_cast<std::uint64_t>(std::max(1.0, n));
}

/// Mean of `sample(stream)` over n samples. Sample s always draws from
/// substream s, and partial sums are combined in fixed chunk order, so the
/// result does not depend on the worker count.
template <class F>
cplx sample_mean(std::uint64_t n, std::uint64_t seed, unsigned workers, F sample) {
  constexpr std::uint64_t kChunk = 4096;
  const RandomStream root(seed);
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<cplx> partial(chunks, 0.0);
  auto run_chunk = [&](std::uint64_t c) {
    cplx s = 0.0;
    const std::uint64_t end = std::min(n, (c + 1) * kChunk);
    for (std::uint64_t k = c * kChunk; k < end; ++k) {
      RandomStream rng = root.substream(k);
      s += sample(rng);
    }
    partial[c] = s;
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(chunks, 256))));
  if (w <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t)
      pool.emplace_back([&] {
        for (std::uint64_t c = next++; c < chunks; c = next++) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }
  cplx total = 0.0;
  for (const auto& p : partial) total += p;
  return n == 0 ? cplx(0.0) : total / static_cast<double>(n);
}

/// Wall-clock helper for Estimate::wall_time.
class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace matfunc

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
#include <string>
#include <utility>
#include <vector>

#include "matfunc/core.hpp"
#include "matfunc/gate.hpp"

namespace matfunc {

/// Gate list on r qubits; qubit 0 is the output qubit and the most
/// significant bit of a basis index.
struct Circuit {
  int r = 1;
  std::vector<Gate> gates;

  int T() const { return static_cast<int>(gates.size()); }

  void validate() const {
    if (r < 1 || r > 62) throw PreconditionError("circuit qubit count out of range");
    if (gates.empty()) throw PreconditionError("circuit needs at least one gate");
    for (const auto& g : gates) g.validate(r);
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

inline std::uint64_t qubit_mask(int r, int q) { return std::uint64_t{1} << (r - 1 - q); }

/// Non-zero entries (row, value) of column d of a gate on r qubits.
inline std::vector<std::pair<index_t, double>> gate_column(const Gate& g, int r, index_t d) {
  switch (g.kind) {
    case Gate::Kind::H: {
      const index_t b = qubit_mask(r, g.a);
      const double s = 1.0 / std::sqrt(2.0);
      return {{d & ~b, s}, {d | b, (d & b) ? -s : s}};
    }
    case Gate::Kind::X:
      return {{d ^ qubit_mask(r, g.a), 1.0}};
    case Gate::Kind::CNOT:
      return {{(d & qubit_mask(r, g.a)) ? d ^ qubit_mask(r, g.b) : d, 1.0}};
    case Gate::Kind::Toffoli: {
      const bool on = (d & qubit_mask(r, g.a)) && (d & qubit_mask(r, g.b));
      return {{on ? d ^ qubit_mask(r, g.c) : d, 1.0}};
    }
  }
  throw PreconditionError("unknown gate");
}

/// state <- g state.
inline void apply_gate(const Gate& g, int r, std::vector<cplx>& state) {
  std::vector<cplx> out(state.size(), 0.0);
  for (index_t d = 0; d < state.size(); ++d) {
    if (state[d] == 0.0) continue;
    for (const auto& [row, v] : gate_column(g, r, d)) out[row] += v * state[d];
  }
  state = std::move(out);
}

/// Exact amplitudes of C|input>.
inline std::vector<cplx> statevector(const Circuit& c, index_t input = 0) {
  c.validate();
  if (c.r > caps().pauli_dense_qubits)
    throw CapExceeded("statevector: " + std::to_string(c.r) + " qubits exceed cap of " +
                      std::to_string(caps().pauli_dense_qubits));
  const index_t dim = index_t{1} << c.r;
  if (input >= dim) throw PreconditionError("statevector: input out of range");
  std::vector<cplx> s(dim, 0.0);
  s[input] = 1.0;
  for (const auto& g : c.gates) apply_gate(g, c.r, s);
  return s;
}

/// Probability that qubit 0 reads 1, i.e. |alpha_1|^2.
inline double acceptance_probability(const std::vector<cplx>& state) {
  double p = 0.0;
  for (std::size_t k = state.size() / 2; k < state.size(); ++k) p += std::norm(state[k]);
  return p;
}

inline double acceptance_probability(const Circuit& c, index_t input = 0) {
  return acceptance_probability(statevector(c, input));
}

}  // namespace matfunc

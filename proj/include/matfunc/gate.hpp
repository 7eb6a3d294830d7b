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

#include <string>
#include <vector>

#include "matfunc/core.hpp"

namespace matfunc {

/// Gate descriptor. Every gate in the set is a real, self-inverse permutation
/// or reflection, so V^dagger = V throughout the clock constructions.
struct Gate {
  enum class Kind { H, X, CNOT, Toffoli };
  Kind kind = Kind::H;
  int a = 0;   // H/X: target; CNOT: control; Toffoli: first control
  int b = -1;  // CNOT: target; Toffoli: second control
  int c = -1;  // Toffoli: target

  static Gate h(int q) { return {Kind::H, q, -1, -1}; }
  static Gate x(int q) { return {Kind::X, q, -1, -1}; }
  static Gate cnot(int control, int target) { return {Kind::CNOT, control, target, -1}; }
  static Gate toffoli(int c0, int c1, int target) { return {Kind::Toffoli, c0, c1, target}; }

  std::vector<int> qubits() const {
    switch (kind) {
      case Kind::H:
      case Kind::X:
        return {a};
      case Kind::CNOT:
        return {a, b};
      case Kind::Toffoli:
        return {a, b, c};
    }
    return {};
  }

  /// Throws unless the qubits are distinct and below n.
  void validate(int n) const {
    const auto qs = qubits();
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (qs[i] < 0 || qs[i] >= n)
        throw PreconditionError("gate qubit " + std::to_string(qs[i]) + " out of range for " +
                                std::to_string(n) + " qubits");
      for (std::size_t j = 0; j < i; ++j)
        if (qs[i] == qs[j]) throw PreconditionError("gate acts twice on qubit " + std::to_string(qs[i]));
    }
  }

  /// Same gate with every qubit index shifted by `offset`.
  Gate shifted(int offset) const {
    Gate g = *this;
    g.a += offset;
    if (g.b >= 0) g.b += offset;
    if (g.c >= 0) g.c += offset;
    return g;
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

inline const char* gate_name(Gate::Kind k) {
  switch (k) {
    case Gate::Kind::H: return "H";
    case Gate::Kind::X: return "X";
    case Gate::Kind::CNOT: return "CNOT";
    case Gate::Kind::Toffoli: return "Toffoli";
  }
  return "?";
}

}  // namespace matfunc

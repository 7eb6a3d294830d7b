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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace matfunc {

using cplx = std::complex<double>;
using index_t = std::uint64_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured size or work limit would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Arguments violate a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The router found no classically tractable regime for the request.
class HardRegime : public Error {
 public:
  HardRegime(std::string row, const std::string& why)
      : Error("hard regime (" + row + "): " + why), row_(std::move(row)) {}
  const std::string& row() const { return row_; }

 private:
  std::string row_;
};

/// Size and work limits. Defaults are desk-scale.
struct Caps {
  std::size_t dense_dim = 4096;        // dense oracle dimension
  int pauli_dense_qubits = 12;         // to_dense / statevector
  int unary_qubits = 40;               // unary clock encodings
  double path_work = 1e8;              // s^m bound for exact path recursion
  std::size_t closure_terms = 1 << 20; // Pauli closure terms held at once
  int closure_generators = 16;         // L accepted by the router
  std::size_t supersparse_k2 = 1 << 20;
  std::size_t poly_degree = 100000;
  std::uint64_t max_samples = 2'000'000'000ULL;
};

/// Process-wide caps; MATFUNC_DENSE_CAP overrides the dense dimension.
inline const Caps& caps() {
  static const Caps c = [] {
    Caps v;
    if (const char* env = std::getenv("MATFUNC_DENSE_CAP")) {
      try {
        v.dense_dim = static_cast<std::size_t>(std::stoull(env));
      } catch (...) {
      }
    }
    return v;
  }();
  return c;
}

inline constexpr double kPi = 3.14159265358979323846;

/// True when basis index i lies in the range of pi = |0><0| (x) 1, i.e. the
/// top half of an even dimension. For N = 2^n this is "top bit of i is 0".
inline bool in_pi(index_t i, index_t dim) { return i < dim / 2; }

}  // namespace matfunc

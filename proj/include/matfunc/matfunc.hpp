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

#include "matfunc/access.hpp"
#include "matfunc/circuit.hpp"
#include "matfunc/clock.hpp"
#include "matfunc/core.hpp"
#include "matfunc/dense.hpp"
#include "matfunc/dense_oracle.hpp"
#include "matfunc/estimate.hpp"
#include "matfunc/exact.hpp"
#include "matfunc/gate.hpp"
#include "matfunc/io.hpp"
#include "matfunc/montecarlo.hpp"
#include "matfunc/pauli.hpp"
#include "matfunc/polynomial.hpp"
#include "matfunc/random.hpp"
#include "matfunc/router.hpp"
#include "matfunc/supersparse.hpp"

// Copyright 2026 The hampart Authors
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

#include "hampart/baranyai.hpp"
#include "hampart/diag_circuit.hpp"
#include "hampart/estimator.hpp"
#include "hampart/fermion_jw.hpp"
#include "hampart/ham_io.hpp"
#include "hampart/pauli.hpp"
#include "hampart/spin_groups.hpp"
#include "hampart/statevector.hpp"

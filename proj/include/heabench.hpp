// Copyright 2026 The heabench Authors
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

#include "heabench/bench.hpp"
#include "heabench/circuit.hpp"
#include "heabench/error.hpp"
#include "heabench/expressibility.hpp"
#include "heabench/hamiltonian.hpp"
#include "heabench/io.hpp"
#include "heabench/noise.hpp"
#include "heabench/parallel.hpp"
#include "heabench/rng.hpp"
#include "heabench/state.hpp"
#include "heabench/vqe.hpp"
#include "heabench/zoo.hpp"

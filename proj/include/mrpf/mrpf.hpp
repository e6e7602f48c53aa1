// Copyright 2026 The mrpf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "mrpf/bench.hpp"
#include "mrpf/dense.hpp"
#include "mrpf/errors.hpp"
#include "mrpf/hamiltonian.hpp"
#include "mrpf/metrics.hpp"
#include "mrpf/pauli.hpp"
#include "mrpf/sampler.hpp"
#include "mrpf/schedule.hpp"
#include "mrpf/series.hpp"

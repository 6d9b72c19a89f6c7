// Copyright 2026 The Stockfire Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "stockfire/corridor_sim.hpp"
#include "stockfire/errors.hpp"
#include "stockfire/gas_model.hpp"
#include "stockfire/kv.hpp"
#include "stockfire/pathway_model.hpp"
#include "stockfire/regime_engine.hpp"
#include "stockfire/rng.hpp"
#include "stockfire/scenario_io.hpp"

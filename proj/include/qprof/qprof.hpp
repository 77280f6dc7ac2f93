// Copyright 2026 The qprof Authors
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

// Everything.

#pragma once

#include "qprof/analysis.hpp"
#include "qprof/circuit.hpp"
#include "qprof/device.hpp"
#include "qprof/error.hpp"
#include "qprof/generator.hpp"
#include "qprof/graph.hpp"
#include "qprof/interaction_graph.hpp"
#include "qprof/mapper.hpp"
#include "qprof/metrics.hpp"
#include "qprof/qasm.hpp"
#include "qprof/random.hpp"
#include "qprof/report.hpp"
#include "qprof/workbench.hpp"

// Copyright 2026 The knng Authors
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

// Umbrella header.

#pragma once

#include "knng/clustering.hpp"
#include "knng/common.hpp"
#include "knng/dataset.hpp"
#include "knng/graph.hpp"
#include "knng/graph_io.hpp"
#include "knng/harness.hpp"
#include "knng/parallel.hpp"
#include "knng/scc.hpp"
#include "knng/search.hpp"
#include "knng/tables.hpp"
#include "knng/theorem1.hpp"
#include "knng/trace_io.hpp"
#include "knng/two_phase.hpp"
#include "knng/vecs_io.hpp"

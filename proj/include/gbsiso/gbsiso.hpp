// Copyright 2026 The gbsiso Authors
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

#include "gbsiso/baselines.hpp"
#include "gbsiso/combinatorics.hpp"
#include "gbsiso/correlations.hpp"
#include "gbsiso/encoding.hpp"
#include "gbsiso/errors.hpp"
#include "gbsiso/fock_oracle.hpp"
#include "gbsiso/graph.hpp"
#include "gbsiso/pipeline.hpp"
#include "gbsiso/refinement.hpp"
#include "gbsiso/version.hpp"

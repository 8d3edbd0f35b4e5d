// Copyright 2026 The NRP Authors.
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

#ifndef NRP_NRP_HPP_
#define NRP_NRP_HPP_

#include "nrp/adversary.hpp"
#include "nrp/bounds.hpp"
#include "nrp/config.hpp"
#include "nrp/dataio.hpp"
#include "nrp/error.hpp"
#include "nrp/metrics.hpp"
#include "nrp/numkit.hpp"
#include "nrp/report.hpp"
#include "nrp/rng.hpp"
#include "nrp/sanitizers.hpp"
#include "nrp/simulation.hpp"
#include "nrp/timing.hpp"
#include "nrp/verify.hpp"

#endif  // NRP_NRP_HPP_

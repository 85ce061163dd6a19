// Copyright 2026 The Authors.
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

#include "divclust/coreset.hpp"
#include "divclust/drivers.hpp"
#include "divclust/errors.hpp"
#include "divclust/generators.hpp"
#include "divclust/instance.hpp"
#include "divclust/io.hpp"
#include "divclust/matching.hpp"
#include "divclust/median_pm.hpp"
#include "divclust/metric.hpp"
#include "divclust/oracle.hpp"
#include "divclust/parallel.hpp"
#include "divclust/pattern.hpp"
#include "divclust/rng.hpp"
#include "divclust/supplier_pm.hpp"

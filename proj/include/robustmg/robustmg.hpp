// Copyright 2026 The RobustMG Authors. All rights reserved.
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

#include "robustmg/experiments.hpp"
#include "robustmg/game_model.hpp"
#include "robustmg/io.hpp"
#include "robustmg/nash_iteration.hpp"
#include "robustmg/plot.hpp"
#include "robustmg/robust_dp.hpp"
#include "robustmg/stage_games.hpp"
#include "robustmg/support_functions.hpp"
#include "robustmg/types.hpp"
#include "robustmg/uncertainty.hpp"

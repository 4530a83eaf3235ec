// Copyright 2026 The psieve Authors
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

#include "psieve/chart.hpp"
#include "psieve/dynamics.hpp"
#include "psieve/errors.hpp"
#include "psieve/optimize.hpp"
#include "psieve/oscillator.hpp"
#include "psieve/qcore.hpp"
#include "psieve/sieve.hpp"
#include "psieve/spin_models.hpp"

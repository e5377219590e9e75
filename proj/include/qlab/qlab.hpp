// Copyright 2026 The qlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file qlab.hpp
 * Umbrella header.
 */
#pragma once

#include "divergence.hpp"
#include "errors.hpp"
#include "extended_real.hpp"
#include "harness/config.hpp"
#include "harness/experiments.hpp"
#include "harness/report.hpp"
#include "largedev.hpp"
#include "matcore.hpp"
#include "modelsel.hpp"
#include "random.hpp"

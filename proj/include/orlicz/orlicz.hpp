// Copyright 2026 The orlicz-gamma Authors
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

// Everything except the CLI verbs.

#include "orlicz/config.hpp"
#include "orlicz/core.hpp"
#include "orlicz/domain.hpp"
#include "orlicz/envelope.hpp"
#include "orlicz/integrand.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/report.hpp"
#include "orlicz/suite.hpp"
#include "orlicz/supremal.hpp"

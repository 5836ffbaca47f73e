// Copyright 2026 The anoseg Authors.
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

#include "anoseg/component_eval.hpp"
#include "anoseg/connectivity.hpp"
#include "anoseg/dataset_io.hpp"
#include "anoseg/domain.hpp"
#include "anoseg/error.hpp"
#include "anoseg/mask_gen.hpp"
#include "anoseg/parallel.hpp"
#include "anoseg/pixel_eval.hpp"
#include "anoseg/report.hpp"
#include "anoseg/sources.hpp"
#include "anoseg/synthgen.hpp"

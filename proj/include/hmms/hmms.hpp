// Copyright 2026 The hereditary-mms Authors.
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

#include "hmms/allocator.hpp"
#include "hmms/errors.hpp"
#include "hmms/instance.hpp"
#include "hmms/io.hpp"
#include "hmms/item_set.hpp"
#include "hmms/mms.hpp"
#include "hmms/rational.hpp"
#include "hmms/set_system.hpp"
#include "hmms/valuation.hpp"

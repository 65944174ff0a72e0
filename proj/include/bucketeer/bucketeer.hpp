// Copyright 2026 The Bucketeer Authors
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

#include "bucketeer/bucket.hpp"
#include "bucketeer/decomposition.hpp"
#include "bucketeer/error.hpp"
#include "bucketeer/exhaustive.hpp"
#include "bucketeer/genfilter.hpp"
#include "bucketeer/harness.hpp"
#include "bucketeer/manifests.hpp"
#include "bucketeer/problem.hpp"
#include "bucketeer/problems/matcher.hpp"
#include "bucketeer/problems/sortacle.hpp"
#include "bucketeer/problems/toposortacle.hpp"
#include "bucketeer/report.hpp"
#include "bucketeer/rng.hpp"
#include "bucketeer/suite.hpp"

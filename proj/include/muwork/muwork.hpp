// Copyright 2026 The muwork Authors
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

// Everything except the command-line layer.

#pragma once

#include "muwork/algebra.hpp"
#include "muwork/asymptotics.hpp"
#include "muwork/channel.hpp"
#include "muwork/convex.hpp"
#include "muwork/correlation.hpp"
#include "muwork/decomposition.hpp"
#include "muwork/error.hpp"
#include "muwork/linalg.hpp"
#include "muwork/mixing.hpp"
#include "muwork/moments.hpp"
#include "muwork/named.hpp"
#include "muwork/random.hpp"
#include "muwork/types.hpp"

// Copyright 2026 The transrank Authors
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

// Umbrella header.

#ifndef TRANSRANK_TRANSRANK_HPP_
#define TRANSRANK_TRANSRANK_HPP_

#include "transrank/core.hpp"
#include "transrank/discovery.hpp"
#include "transrank/error.hpp"
#include "transrank/inference.hpp"
#include "transrank/io.hpp"
#include "transrank/likelihood.hpp"
#include "transrank/optimize.hpp"
#include "transrank/simulate.hpp"
#include "transrank/transfer.hpp"

#endif  // TRANSRANK_TRANSRANK_HPP_

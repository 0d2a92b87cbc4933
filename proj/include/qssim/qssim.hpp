// Copyright 2026 The qssim Authors
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

#ifndef QSSIM_QSSIM_HPP
#define QSSIM_QSSIM_HPP

#include <string_view>

#include "qssim/adversaries.hpp"
#include "qssim/detector.hpp"
#include "qssim/protocol.hpp"
#include "qssim/harness.hpp"
#include "qssim/quantum.hpp"
#include "qssim/rng.hpp"
#include "qssim/session.hpp"

namespace qssim {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace qssim

#endif  // QSSIM_QSSIM_HPP

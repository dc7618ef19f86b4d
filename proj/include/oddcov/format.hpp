// Copyright 2026 The oddcov Authors
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

#include <cstdint>
#include <string>

namespace oddcov {

// Shortest text that parses back to the same double.
std::string format_real(double value);

// 195200 -> "195,200"
std::string group_thousands(std::uint64_t value);

// Fixed-point with `decimals` digits.
std::string format_fixed(double value, int decimals);

}  // namespace oddcov

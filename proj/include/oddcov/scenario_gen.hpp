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
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "oddcov/grouping.hpp"
#include "oddcov/ingest.hpp"
#include "oddcov/odd_spec.hpp"
#include "oddcov/space.hpp"

namespace oddcov {

enum class Strategy { center, random_in_bin };

struct GenerationOptions {
  Strategy strategy = Strategy::center;
  std::uint64_t seed = 0;
};

struct GeneratedScenario {
  ComboIndex gap_index = 0;
  ScenarioRecord record;
};

// Concrete values for every pre-grouping parameter that re-discretize to
// `gap`. random_in_bin draws strictly inside each bin from a generator
// seeded by (seed, gap), so output does not depend on processing order.
// Collapsed dimensions emit their representative; mapped dimensions use the
// first source bin tuple (in table order) whose image is the group bin.
ScenarioRecord scenario_for_gap(ComboIndex gap, const EffectiveDimensions& dims,
                                const CombinationSpace& space,
                                const GenerationOptions& options);

std::vector<GeneratedScenario> gaps_to_scenarios(
    std::span<const ComboIndex> gaps, const EffectiveDimensions& dims,
    const CombinationSpace& space, const GenerationOptions& options);

// One column per parameter (dataset column names) followed by gap_index.
// Categorical values are written as level labels; reals in shortest
// round-trip form.
class ScenarioWriter {
 public:
  ScenarioWriter(std::ostream& out, const OddSpec& spec);
  void write(const GeneratedScenario& scenario);

 private:
  std::ostream& out_;
  const OddSpec& spec_;
};

}  // namespace oddcov

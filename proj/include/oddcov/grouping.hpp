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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oddcov/binning.hpp"
#include "oddcov/odd_spec.hpp"

namespace oddcov {

enum class DimensionKind {
  binned,       // continuous parameter, passes through with its edges
  categorical,  // categorical parameter, one bin per level
  collapsed,    // collapse grouping, exactly one bin
  mapped,       // map grouping, group_bin_count bins via a lookup table
};

struct EffectiveDimension {
  std::string name;
  DimensionKind kind = DimensionKind::binned;
  std::uint32_t bin_count = 1;
  // Indices into OddSpec::parameters, in grouping source order.
  std::vector<std::size_t> sources;
  // binned/categorical: the source's edges.
  BinEdges edges;
  // mapped: group bin per source bin tuple, linearised with source_radices
  // (last source fastest).
  std::vector<std::uint32_t> table;
  std::vector<std::uint32_t> source_radices;
  // collapsed: value seen by constraints (range midpoint, or level 0).
  double representative = 0.0;
  // collapsed with a continuous first source: that source's range.
  std::optional<std::pair<double, double>> collapsed_range;

  // Value bound to the dimension's name when evaluating constraints for bin
  // `bin`: bin center, level index, representative, or group index.
  double value(std::uint32_t bin) const;
  // Bin extremes for corner evaluation (one value for point-like bins).
  std::vector<double> corner_values(std::uint32_t bin) const;
  // Axis edges used by projections: the real edges where they exist,
  // otherwise 0..bin_count.
  std::vector<double> axis_edges() const;
};

struct EffectiveDimensions {
  std::vector<EffectiveDimension> dims;
  // Pre-grouping edges for every parameter, spec order.
  std::vector<BinEdges> parameter_edges;

  std::vector<std::string> names() const;
  std::optional<std::size_t> find(std::string_view name) const;
  // Product of bin counts; nullopt on 64-bit overflow.
  std::optional<std::uint64_t> total() const;
};

std::vector<BinEdges> build_all_edges(const OddSpec& spec);

// Replaces each grouping's sources by its target dimension (placed where the
// first source was). Throws SpecError when a parameter appears in two
// groupings or a map table is not total.
EffectiveDimensions apply_groupings(const OddSpec& spec,
                                    std::vector<BinEdges> edges);

inline EffectiveDimensions build_dimensions(const OddSpec& spec) {
  return apply_groupings(spec, build_all_edges(spec));
}

// Names of the post-grouping dimensions, derivable without building edges.
std::vector<std::string> effective_names(const OddSpec& spec);

}  // namespace oddcov

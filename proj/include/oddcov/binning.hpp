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
#include <vector>

#include "oddcov/odd_spec.hpp"

namespace oddcov {

// Discretization of one parameter. Continuous parameters carry n+1 strictly
// ascending edges; bins are half-open [e_i, e_{i+1}) except the last, which
// is closed above. Categorical parameters carry their levels, one bin each,
// and are addressed by level index.
struct BinEdges {
  std::string parameter;
  std::vector<double> edges;
  std::vector<std::string> levels;

  bool categorical() const { return !levels.empty(); }
  std::uint32_t size() const;
  double range_min() const;
  double range_max() const;
  double low(std::uint32_t index) const;
  double high(std::uint32_t index) const;

  bool operator==(const BinEdges&) const = default;
};

// min + (max - min) * i / n, with the end points pinned.
std::vector<double> equal_width_edges(double min, double max, std::uint32_t n);

// Integral of the profile density over [lo, hi]. Uniform profiles have
// density 1 everywhere.
double criticality_mass(const CriticalityProfile& profile, double lo, double hi);

// Edges with equal criticality mass per bin, by analytic inversion of the
// piecewise-linear cumulative mass. Throws SpecError when the mass over the
// range is not positive or when the profile does not span [min, max].
BinEdges edges_from_criticality(const CriticalityProfile& profile, double min,
                                double max, std::uint32_t n);

BinEdges build_edges(const ParameterSpec& param,
                     std::span<const CriticalityProfile> profiles);

// nullopt means the value lies outside the parameter range (or is NaN).
// For categorical edges the value is a level index.
std::optional<std::uint32_t> value_to_bin(double value, const BinEdges& edges);

// Midpoint of the bin; the level index for categorical edges. Throws
// std::out_of_range for an invalid index.
double bin_center(std::uint32_t index, const BinEdges& edges);

}  // namespace oddcov

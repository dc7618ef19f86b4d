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

#include "oddcov/grouping.hpp"

#include <limits>
#include <map>

#include "oddcov/errors.hpp"

namespace oddcov {

double EffectiveDimension::value(std::uint32_t bin) const {
  switch (kind) {
    case DimensionKind::binned:
      return bin_center(bin, edges);
    case DimensionKind::collapsed:
      return representative;
    case DimensionKind::categorical:
    case DimensionKind::mapped:
      return bin;
  }
  return bin;
}

std::vector<double> EffectiveDimension::corner_values(std::uint32_t bin) const {
  if (kind == DimensionKind::binned) return {edges.low(bin), edges.high(bin)};
  if (kind == DimensionKind::collapsed && collapsed_range) {
    return {collapsed_range->first, collapsed_range->second};
  }
  return {value(bin)};
}

std::vector<double> EffectiveDimension::axis_edges() const {
  if (kind == DimensionKind::binned) return edges.edges;
  if (kind == DimensionKind::collapsed && collapsed_range) {
    return {collapsed_range->first, collapsed_range->second};
  }
  std::vector<double> out(bin_count + 1);
  for (std::uint32_t i = 0; i <= bin_count; ++i) out[i] = i;
  return out;
}

std::vector<std::string> EffectiveDimensions::names() const {
  std::vector<std::string> out;
  out.reserve(dims.size());
  for (const auto& d : dims) out.push_back(d.name);
  return out;
}

std::optional<std::size_t> EffectiveDimensions::find(std::string_view name) const {
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> EffectiveDimensions::total() const {
  std::uint64_t total = 1;
  for (const auto& d : dims) {
    if (__builtin_mul_overflow(total, std::uint64_t{d.bin_count}, &total)) {
      return std::nullopt;
    }
  }
  return total;
}

std::vector<BinEdges> build_all_edges(const OddSpec& spec) {
  std::vector<BinEdges> out;
  out.reserve(spec.parameters.size());
  for (const auto& p : spec.parameters) {
    out.push_back(build_edges(p, spec.criticality_profiles));
  }
  return out;
}

namespace {

// Parameter index -> owning grouping. Unknown parameters are skipped here
// and reported by the caller.
std::map<std::size_t, std::size_t> grouping_owners(const OddSpec& spec, bool strict) {
  std::map<std::size_t, std::size_t> owner;
  for (std::size_t g = 0; g < spec.groupings.size(); ++g) {
    for (const auto& source : spec.groupings[g].sources) {
      const auto index = spec.parameter_index(source);
      if (!index) {
        if (strict) {
          throw SpecError("grouping '" + spec.groupings[g].target_name +
                          "': unknown parameter '" + source + "'");
        }
        continue;
      }
      auto [it, inserted] = owner.emplace(*index, g);
      if (!inserted && strict) {
        throw SpecError("parameter '" + source + "' appears in two groupings");
      }
    }
  }
  return owner;
}

bool is_anchor(const OddSpec& spec, std::size_t param, const GroupingSpec& g) {
  return !g.sources.empty() && spec.parameters[param].name == g.sources.front();
}

}  // namespace

std::vector<std::string> effective_names(const OddSpec& spec) {
  const auto owner = grouping_owners(spec, false);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < spec.parameters.size(); ++i) {
    auto it = owner.find(i);
    if (it == owner.end()) {
      names.push_back(spec.parameters[i].name);
    } else if (is_anchor(spec, i, spec.groupings[it->second])) {
      names.push_back(spec.groupings[it->second].target_name);
    }
  }
  return names;
}

EffectiveDimensions apply_groupings(const OddSpec& spec, std::vector<BinEdges> edges) {
  if (edges.size() != spec.parameters.size()) {
    throw SpecError("edge list does not match the parameter list");
  }
  const auto owner = grouping_owners(spec, true);
  EffectiveDimensions out;
  for (std::size_t i = 0; i < spec.parameters.size(); ++i) {
    auto it = owner.find(i);
    if (it == owner.end()) {
      EffectiveDimension d;
      d.name = spec.parameters[i].name;
      d.kind = edges[i].categorical() ? DimensionKind::categorical : DimensionKind::binned;
      d.bin_count = edges[i].size();
      d.sources = {i};
      d.edges = edges[i];
      out.dims.push_back(std::move(d));
      continue;
    }
    const GroupingSpec& g = spec.groupings[it->second];
    if (!is_anchor(spec, i, g)) continue;

    EffectiveDimension d;
    d.name = g.target_name;
    for (const auto& source : g.sources) d.sources.push_back(*spec.parameter_index(source));
    if (g.mode == GroupingMode::collapse) {
      if (g.group_bin_count != 1) {
        throw SpecError("grouping '" + g.target_name + "': collapse produces exactly one bin");
      }
      d.kind = DimensionKind::collapsed;
      d.bin_count = 1;
      const BinEdges& first = edges[d.sources.front()];
      if (first.categorical()) {
        d.representative = 0.0;
      } else {
        d.representative = (first.range_min() + first.range_max()) / 2.0;
        d.collapsed_range = std::pair{first.range_min(), first.range_max()};
      }
    } else {
      d.kind = DimensionKind::mapped;
      d.bin_count = g.group_bin_count;
      if (d.bin_count < 1) throw SpecError("grouping '" + g.target_name + "': no group bins");
      std::uint64_t tuples = 1;
      for (std::size_t s : d.sources) {
        d.source_radices.push_back(edges[s].size());
        tuples *= edges[s].size();
        if (tuples > (1u << 24)) {
          throw SpecError("grouping '" + g.target_name + "': source space too large");
        }
      }
      constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
      d.table.assign(tuples, kUnset);
      std::vector<bool> image(d.bin_count, false);
      for (const auto& e : g.map_table) {
        if (e.source_bins.size() != d.sources.size()) {
          throw SpecError("grouping '" + g.target_name + "': map entry arity mismatch");
        }
        std::uint64_t linear = 0;
        for (std::size_t k = 0; k < e.source_bins.size(); ++k) {
          if (e.source_bins[k] >= d.source_radices[k]) {
            throw SpecError("grouping '" + g.target_name + "': source bin out of range");
          }
          linear = linear * d.source_radices[k] + e.source_bins[k];
        }
        if (e.group_bin >= d.bin_count) {
          throw SpecError("grouping '" + g.target_name + "': group bin out of range");
        }
        if (d.table[linear] != kUnset) {
          throw SpecError("grouping '" + g.target_name + "': source tuple mapped twice");
        }
        d.table[linear] = e.group_bin;
        image[e.group_bin] = true;
      }
      for (auto v : d.table) {
        if (v == kUnset) throw SpecError("grouping '" + g.target_name + "': map_table not total");
      }
      for (std::uint32_t b = 0; b < d.bin_count; ++b) {
        if (!image[b]) {
          throw SpecError("grouping '" + g.target_name + "': group bin " +
                          std::to_string(b) + " has no preimage");
        }
      }
    }
    out.dims.push_back(std::move(d));
  }
  out.parameter_edges = std::move(edges);
  return out;
}

}  // namespace oddcov

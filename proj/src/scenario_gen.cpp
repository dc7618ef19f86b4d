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

#include "oddcov/scenario_gen.hpp"

#include <cmath>

#include "oddcov/csv.hpp"
#include "oddcov/format.hpp"

namespace oddcov {

namespace {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1).
  double unit() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

double value_in_bin(const BinEdges& edges, std::uint32_t bin, Strategy strategy,
                    SplitMix64& rng) {
  if (edges.categorical() || strategy == Strategy::center) return bin_center(bin, edges);
  const double lo = edges.low(bin);
  const double hi = edges.high(bin);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double x = lo + rng.unit() * (hi - lo);
    if (x > lo && x < hi && value_to_bin(x, edges) == bin) return x;
  }
  return bin_center(bin, edges);
}

double representative(const BinEdges& edges) {
  if (edges.categorical()) return 0.0;
  return edges.range_min() + (edges.range_max() - edges.range_min()) / 2.0;
}

}  // namespace

ScenarioRecord scenario_for_gap(ComboIndex gap, const EffectiveDimensions& dims,
                                const CombinationSpace& space,
                                const GenerationOptions& options) {
  const std::vector<std::uint32_t> bins = space.decode(gap);
  SplitMix64 rng(SplitMix64(options.seed).next() ^ gap);
  const auto& edges = dims.parameter_edges;
  ScenarioRecord record;
  record.values.assign(edges.size(), std::nan(""));
  for (std::size_t d = 0; d < dims.dims.size(); ++d) {
    const EffectiveDimension& dim = dims.dims[d];
    switch (dim.kind) {
      case DimensionKind::binned:
      case DimensionKind::categorical: {
        const std::size_t s = dim.sources.front();
        record.values[s] = value_in_bin(edges[s], bins[d], options.strategy, rng);
        break;
      }
      case DimensionKind::collapsed:
        for (std::size_t s : dim.sources) record.values[s] = representative(edges[s]);
        break;
      case DimensionKind::mapped: {
        std::size_t linear = 0;
        while (linear < dim.table.size() && dim.table[linear] != bins[d]) ++linear;
        // Table images cover every group bin, so the search always succeeds.
        for (std::size_t k = dim.sources.size(); k-- > 0;) {
          const std::size_t s = dim.sources[k];
          const auto source_bin = static_cast<std::uint32_t>(linear % dim.source_radices[k]);
          linear /= dim.source_radices[k];
          record.values[s] = value_in_bin(edges[s], source_bin, options.strategy, rng);
        }
        break;
      }
    }
  }
  return record;
}

std::vector<GeneratedScenario> gaps_to_scenarios(std::span<const ComboIndex> gaps,
                                                 const EffectiveDimensions& dims,
                                                 const CombinationSpace& space,
                                                 const GenerationOptions& options) {
  std::vector<GeneratedScenario> out;
  out.reserve(gaps.size());
  for (ComboIndex gap : gaps) out.push_back({gap, scenario_for_gap(gap, dims, space, options)});
  return out;
}

ScenarioWriter::ScenarioWriter(std::ostream& out, const OddSpec& spec) : out_(out), spec_(spec) {
  for (const auto& p : spec_.parameters) out_ << csv::escape(spec_.column_for(p.name)) << ',';
  out_ << "gap_index\n";
}

void ScenarioWriter::write(const GeneratedScenario& scenario) {
  for (std::size_t p = 0; p < spec_.parameters.size(); ++p) {
    const ParameterSpec& param = spec_.parameters[p];
    const double v = scenario.record.values[p];
    if (param.continuous()) {
      out_ << format_real(v);
    } else {
      out_ << csv::escape(param.levels[static_cast<std::size_t>(v)]);
    }
    out_ << ',';
  }
  out_ << scenario.gap_index << '\n';
}

}  // namespace oddcov

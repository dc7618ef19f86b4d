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

#include "oddcov/space.hpp"

#include <stdexcept>
#include <thread>

#include "oddcov/errors.hpp"
#include "oddcov/format.hpp"
#include "oddcov/parallel.hpp"

namespace oddcov {

unsigned default_jobs() {
  return std::max(1u, std::thread::hardware_concurrency());
}

CombinationSpace::CombinationSpace(std::vector<std::uint32_t> radices)
    : radices_(std::move(radices)), strides_(radices_.size(), 1) {
  for (std::size_t i = radices_.size(); i-- > 0;) {
    if (radices_[i] == 0) throw SpecError("dimension with zero bins");
    strides_[i] = total_;
    if (__builtin_mul_overflow(total_, std::uint64_t{radices_[i]}, &total_)) {
      throw SpecError("combination space exceeds 2^64; group or collapse dimensions");
    }
  }
}

CombinationSpace CombinationSpace::from(const EffectiveDimensions& dims) {
  std::vector<std::uint32_t> radices;
  radices.reserve(dims.dims.size());
  for (const auto& d : dims.dims) radices.push_back(d.bin_count);
  return CombinationSpace(std::move(radices));
}

ComboIndex CombinationSpace::encode(std::span<const std::uint32_t> bins) const {
  if (bins.size() != radices_.size()) throw std::out_of_range("bin vector rank mismatch");
  ComboIndex index = 0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i] >= radices_[i]) {
      throw std::out_of_range("bin " + std::to_string(bins[i]) + " out of radix " +
                              std::to_string(radices_[i]) + " in dimension " +
                              std::to_string(i));
    }
    index += bins[i] * strides_[i];
  }
  return index;
}

void CombinationSpace::decode(ComboIndex index, std::span<std::uint32_t> bins) const {
  if (index >= total_) throw std::out_of_range("combination index out of range");
  if (bins.size() != radices_.size()) throw std::out_of_range("bin vector rank mismatch");
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    bins[i] = static_cast<std::uint32_t>(index / strides_[i]);
    index %= strides_[i];
  }
}

std::vector<std::uint32_t> CombinationSpace::decode(ComboIndex index) const {
  std::vector<std::uint32_t> bins(radices_.size());
  decode(index, bins);
  return bins;
}

SpaceCounts count_spaces(const OddSpec& spec) {
  const EffectiveDimensions dims = build_dimensions(spec);
  SpaceCounts counts;
  counts.full_total = 1;
  for (const auto& e : dims.parameter_edges) {
    if (__builtin_mul_overflow(counts.full_total, std::uint64_t{e.size()}, &counts.full_total)) {
      throw SpecError("pre-grouping combination space exceeds 2^64");
    }
  }
  const auto adjusted = dims.total();
  if (!adjusted) throw SpecError("combination space exceeds 2^64; group or collapse dimensions");
  counts.adjusted_total = *adjusted;
  return counts;
}

RelevanceFilter::RelevanceFilter(const EffectiveDimensions& dims,
                                 std::vector<NamedConstraint> constraints,
                                 ConstraintEval mode)
    : names_(dims.names()), constraints_(std::move(constraints)), mode_(mode) {
  for (const auto& c : constraints_) {
    try {
      bound_.emplace_back(*c.expr, names_);
    } catch (const SpecError& e) {
      throw SpecError("constraint '" + c.name + "': " + e.what());
    }
  }
  values_.resize(dims.dims.size());
  for (std::size_t d = 0; d < dims.dims.size(); ++d) {
    const auto& dim = dims.dims[d];
    values_[d].resize(dim.bin_count);
    for (std::uint32_t b = 0; b < dim.bin_count; ++b) values_[d][b] = dim.value(b);
  }
  if (mode_ == ConstraintEval::corners) {
    corners_.resize(dims.dims.size());
    for (std::size_t d = 0; d < dims.dims.size(); ++d) {
      const auto& dim = dims.dims[d];
      corners_[d].resize(dim.bin_count);
      for (std::uint32_t b = 0; b < dim.bin_count; ++b) corners_[d][b] = dim.corner_values(b);
    }
  }
}

RelevanceFilter RelevanceFilter::from_spec(const OddSpec& spec,
                                           const EffectiveDimensions& dims,
                                           ConstraintEval mode) {
  std::vector<NamedConstraint> constraints;
  for (const auto& c : spec.constraints) {
    if (!c.enabled) continue;
    try {
      constraints.push_back({c.name, dsl::parse_expr(c.expression)});
    } catch (const ParseError& e) {
      throw SpecError("constraint '" + c.name + "': " + e.what());
    }
  }
  return RelevanceFilter(dims, std::move(constraints), mode);
}

bool RelevanceFilter::test_point(std::span<const double> point,
                                 std::span<const std::uint32_t> bins) const {
  for (std::size_t i = 0; i < bound_.size(); ++i) {
    try {
      if (!bound_[i].test(point)) return false;
    } catch (const EvalError& e) {
      std::string where = "(";
      for (std::size_t d = 0; d < bins.size(); ++d) {
        if (d > 0) where += ", ";
        where += names_[d] + "=" + format_real(point[d]) + " [bin " + std::to_string(bins[d]) + "]";
      }
      where += ")";
      throw EvalError("constraint '" + constraints_[i].name + "' failed at combination " +
                      where + ": " + e.what());
    }
  }
  return true;
}

namespace {

bool corners_relevant(const std::vector<std::vector<std::vector<double>>>& corners,
                      std::span<const std::uint32_t> bins, std::vector<double>& point,
                      std::vector<std::size_t>& pick,
                      const std::function<bool(std::span<const double>)>& test) {
  const std::size_t rank = bins.size();
  pick.assign(rank, 0);
  for (std::size_t d = 0; d < rank; ++d) point[d] = corners[d][bins[d]][0];
  while (true) {
    if (test(point)) return true;
    std::size_t d = rank;
    while (d-- > 0) {
      const auto& options = corners[d][bins[d]];
      if (++pick[d] < options.size()) {
        point[d] = options[pick[d]];
        break;
      }
      pick[d] = 0;
      point[d] = options[0];
    }
    if (d == static_cast<std::size_t>(-1)) return false;
  }
}

}  // namespace

bool RelevanceFilter::relevant(std::span<const std::uint32_t> bins) const {
  if (constraints_.empty()) return true;
  std::vector<double> point(values_.size());
  if (mode_ == ConstraintEval::center) {
    for (std::size_t d = 0; d < point.size(); ++d) point[d] = values_[d][bins[d]];
    return test_point(point, bins);
  }
  std::vector<std::size_t> pick;
  return corners_relevant(corners_, bins, point, pick,
                          [&](std::span<const double> p) { return test_point(p, bins); });
}

void scan_relevance(const CombinationSpace& space, const RelevanceFilter& filter,
                    ComboIndex begin, ComboIndex end,
                    const std::function<void(ComboIndex, bool)>& fn) {
  if (begin >= end) return;
  const std::size_t rank = space.rank();
  std::vector<std::uint32_t> bins = space.decode(begin);
  if (filter.constraints_.empty()) {
    for (ComboIndex i = begin; i < end; ++i) fn(i, true);
    return;
  }
  const auto& radices = space.radices();
  std::vector<double> point(rank);
  for (std::size_t d = 0; d < rank; ++d) point[d] = filter.values_[d][bins[d]];
  std::vector<std::size_t> pick;
  std::vector<double> corner_point(rank);
  auto corner_test = [&](std::span<const double> p) { return filter.test_point(p, bins); };
  for (ComboIndex i = begin; i < end; ++i) {
    const bool relevant =
        filter.mode_ == ConstraintEval::center
            ? filter.test_point(point, bins)
            : corners_relevant(filter.corners_, bins, corner_point, pick, corner_test);
    fn(i, relevant);
    for (std::size_t d = rank; d-- > 0;) {
      if (++bins[d] < radices[d]) {
        point[d] = filter.values_[d][bins[d]];
        break;
      }
      bins[d] = 0;
      point[d] = filter.values_[d][0];
    }
  }
}

namespace {
constexpr std::uint64_t kBlock = 1 << 16;
}

std::uint64_t enumerate_relevant(const CombinationSpace& space,
                                 const RelevanceFilter& filter, unsigned jobs,
                                 const std::function<void(ComboIndex)>& sink) {
  std::uint64_t count = 0;
  ordered_parallel_for(
      space.total(), jobs, kBlock,
      [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<ComboIndex> hits;
        scan_relevance(space, filter, begin, end, [&](ComboIndex i, bool relevant) {
          if (relevant) hits.push_back(i);
        });
        return hits;
      },
      [&](std::vector<ComboIndex>&& hits) {
        for (ComboIndex i : hits) sink(i);
        count += hits.size();
      });
  return count;
}

std::uint64_t count_relevant(const CombinationSpace& space,
                             const RelevanceFilter& filter, unsigned jobs) {
  if (filter.unconstrained()) return space.total();
  std::uint64_t count = 0;
  ordered_parallel_for(
      space.total(), jobs, kBlock,
      [&](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t n = 0;
        scan_relevance(space, filter, begin, end,
                       [&](ComboIndex, bool relevant) { n += relevant; });
        return n;
      },
      [&](std::uint64_t n) { count += n; });
  return count;
}

}  // namespace oddcov

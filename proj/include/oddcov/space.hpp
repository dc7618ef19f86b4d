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
#include <span>
#include <string>
#include <vector>

#include "oddcov/constraint_dsl.hpp"
#include "oddcov/grouping.hpp"
#include "oddcov/odd_spec.hpp"

namespace oddcov {

using ComboIndex = std::uint64_t;

// Mixed-radix view of B_1 x ... x B_n. The last dimension has stride 1.
class CombinationSpace {
 public:
  // Throws SpecError when a radix is zero or the product overflows 64 bits.
  explicit CombinationSpace(std::vector<std::uint32_t> radices);
  static CombinationSpace from(const EffectiveDimensions& dims);

  std::size_t rank() const { return radices_.size(); }
  std::uint64_t total() const { return total_; }
  const std::vector<std::uint32_t>& radices() const { return radices_; }
  const std::vector<std::uint64_t>& strides() const { return strides_; }

  // Throws std::out_of_range when a component exceeds its radix.
  ComboIndex encode(std::span<const std::uint32_t> bins) const;
  // Throws std::out_of_range when index >= total.
  void decode(ComboIndex index, std::span<std::uint32_t> bins) const;
  std::vector<std::uint32_t> decode(ComboIndex index) const;

 private:
  std::vector<std::uint32_t> radices_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t total_ = 1;
};

struct SpaceCounts {
  std::uint64_t full_total = 0;      // pre-grouping product
  std::uint64_t adjusted_total = 0;  // post-grouping product
};

// Throws SpecError on overflow.
SpaceCounts count_spaces(const OddSpec& spec);

enum class ConstraintEval {
  center,   // one verdict per combination, at bin centers
  corners,  // relevant iff any corner of the bin box satisfies all constraints
};

struct NamedConstraint {
  std::string name;
  dsl::ExprPtr expr;
};

// Decides whether a combination is relevant. Immutable; relevant() may be
// called concurrently.
class RelevanceFilter {
 public:
  // Throws SpecError when a constraint does not check against dims.
  RelevanceFilter(const EffectiveDimensions& dims,
                  std::vector<NamedConstraint> constraints,
                  ConstraintEval mode = ConstraintEval::center);

  // Parses and binds the spec's enabled constraints.
  static RelevanceFilter from_spec(const OddSpec& spec,
                                   const EffectiveDimensions& dims,
                                   ConstraintEval mode = ConstraintEval::center);

  bool unconstrained() const { return constraints_.empty(); }
  ConstraintEval mode() const { return mode_; }
  std::size_t rank() const { return values_.size(); }

  // Throws EvalError naming the constraint and the combination.
  bool relevant(std::span<const std::uint32_t> bins) const;

 private:
  friend void scan_relevance(const CombinationSpace&, const RelevanceFilter&,
                             ComboIndex, ComboIndex,
                             const std::function<void(ComboIndex, bool)>&);
  bool test_point(std::span<const double> point,
                  std::span<const std::uint32_t> bins) const;

  std::vector<std::string> names_;
  std::vector<NamedConstraint> constraints_;
  std::vector<dsl::BoundExpr> bound_;
  // values_[d][bin]: center-mode value; corners_[d][bin]: corner values.
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<std::vector<double>>> corners_;
  ConstraintEval mode_;
};

// Calls sink(index) for every relevant combination in ascending order and
// returns how many there were. Results do not depend on `jobs`.
std::uint64_t enumerate_relevant(const CombinationSpace& space,
                                 const RelevanceFilter& filter, unsigned jobs,
                                 const std::function<void(ComboIndex)>& sink);

std::uint64_t count_relevant(const CombinationSpace& space,
                             const RelevanceFilter& filter, unsigned jobs = 1);

// Walks [begin, end) with an odometer, calling fn(index, relevant).
void scan_relevance(const CombinationSpace& space, const RelevanceFilter& filter,
                    ComboIndex begin, ComboIndex end,
                    const std::function<void(ComboIndex, bool)>& fn);

}  // namespace oddcov

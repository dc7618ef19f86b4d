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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oddcov/space.hpp"

namespace oddcov {

enum class Representation { dense, sparse };

// Dense when total <= 2^31 (a 256 MiB bit array at most).
Representation choose_representation(std::uint64_t total);

// Combinations exercised by at least one data point. Dense and sparse
// representations answer membership identically.
class CoveredSet {
 public:
  CoveredSet(std::uint64_t total, std::string spec_hash,
             std::optional<Representation> representation = std::nullopt);

  std::uint64_t total() const { return total_; }
  const std::string& spec_hash() const { return spec_hash_; }
  Representation representation() const { return representation_; }
  std::uint64_t count() const { return count_; }

  // Idempotent. Throws std::out_of_range for index >= total.
  void mark(ComboIndex index);
  bool contains(ComboIndex index) const;

  // In-place union. Throws HashMismatch for a different spec_hash and
  // SpecError for a different total.
  void merge(const CoveredSet& other);

  // Ascending.
  void for_each(const std::function<void(ComboIndex)>& fn) const;
  std::vector<ComboIndex> members() const;

  // Versioned little-endian sidecar.
  void write(std::ostream& out) const;
  static CoveredSet read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static CoveredSet load(const std::filesystem::path& path);

 private:
  std::uint64_t total_;
  std::string spec_hash_;
  Representation representation_;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> words_;
  std::set<ComboIndex> sparse_;
};

CoveredSet set_union(const CoveredSet& a, const CoveredSet& b);

// Throws HashMismatch unless the set was built under `expected_hash`.
void require_hash(const CoveredSet& set, const std::string& expected_hash);

struct IngestStats {
  std::uint64_t rows_read = 0;
  std::uint64_t rows_mapped = 0;
  std::uint64_t rows_out_of_range = 0;
  std::uint64_t rows_malformed = 0;
  // Rows mapped after clamping (clamp policy only); included in rows_mapped.
  std::uint64_t rows_clamped = 0;
  // Out-of-range values per parameter, spec order.
  std::vector<std::pair<std::string, std::uint64_t>> out_of_range_by_parameter;

  IngestStats& operator+=(const IngestStats& other);
  bool operator==(const IngestStats&) const = default;
};

struct CoverageReport {
  std::uint64_t total = 0;
  std::uint64_t relevant = 0;
  std::uint64_t covered_total = 0;
  std::uint64_t covered_relevant = 0;
  double r_cov = 0.0;                // covered_relevant / relevant
  double r_cov_unconstrained = 0.0;  // covered_total / total
  std::uint64_t gap_count = 0;       // relevant - covered_relevant
  IngestStats ingest;

  bool operator==(const CoverageReport&) const = default;
};

// Relevance is evaluated on demand; an empty relevant space reports
// r_cov = 1 (nothing left to cover).
CoverageReport compute_report(const CoveredSet& set,
                              const CombinationSpace& space,
                              const RelevanceFilter& filter, unsigned jobs = 1);

// Relevant combinations missing from `set`, ascending, stopping after
// `limit` when given. Returns the number emitted.
std::uint64_t list_gaps(const CoveredSet& set, const CombinationSpace& space,
                        const RelevanceFilter& filter,
                        std::optional<std::uint64_t> limit, unsigned jobs,
                        const std::function<void(ComboIndex)>& sink);

std::vector<ComboIndex> list_gaps(const CoveredSet& set,
                                  const CombinationSpace& space,
                                  const RelevanceFilter& filter,
                                  std::optional<std::uint64_t> limit = {},
                                  unsigned jobs = 1);

}  // namespace oddcov

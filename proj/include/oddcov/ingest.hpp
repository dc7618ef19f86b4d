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
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "oddcov/coverage.hpp"
#include "oddcov/csv.hpp"
#include "oddcov/grouping.hpp"
#include "oddcov/odd_spec.hpp"
#include "oddcov/space.hpp"

namespace oddcov {

enum class OutOfRangePolicy { skip, error, clamp };

// One value per parameter in spec order; categorical values are level
// indices. Parameters absent from the dataset hold NaN.
struct ScenarioRecord {
  std::vector<double> values;
  bool operator==(const ScenarioRecord&) const = default;
};

// Every parameter whose value fell outside its range, spec order.
struct OutOfRange {
  std::vector<std::size_t> parameters;
};

struct Malformed {
  std::string reason;
};

using RecordOutcome = std::variant<ComboIndex, OutOfRange, Malformed>;

// Maps scenario records onto combination indices.
class Discretizer {
 public:
  Discretizer(const OddSpec& spec, const EffectiveDimensions& dims,
              OutOfRangePolicy policy = OutOfRangePolicy::skip);

  // Per-dimension bins in `bins`; returns the combo index or why not.
  // Under clamp, out-of-range values land in the nearest end bin.
  RecordOutcome record_to_combo(const ScenarioRecord& record,
                                const CombinationSpace& space,
                                std::span<std::uint32_t> bins) const;
  RecordOutcome record_to_combo(const ScenarioRecord& record,
                                const CombinationSpace& space) const;
  // As above; `clamped` reports whether the clamp policy moved a value.
  RecordOutcome record_to_combo(const ScenarioRecord& record,
                                const CombinationSpace& space,
                                std::span<std::uint32_t> bins,
                                bool& clamped) const;

  // Parameters whose values decide a bin (collapsed ones do not).
  const std::vector<bool>& required() const { return required_; }
  OutOfRangePolicy policy() const { return policy_; }

 private:
  const EffectiveDimensions* dims_;
  std::vector<bool> required_;
  OutOfRangePolicy policy_;
};

// Locates mapped columns in a header and converts text fields to values.
class RecordDecoder {
 public:
  // Throws DataError naming the first missing column.
  RecordDecoder(const OddSpec& spec, const Discretizer& discretizer,
                const std::vector<std::string>& header,
                const std::string& source);

  // Malformed on a wrong field count, unparsable number, non-finite value
  // or unknown level.
  std::variant<ScenarioRecord, Malformed> decode(
      std::span<const std::string_view> fields) const;

  std::size_t width() const { return width_; }

 private:
  const OddSpec* spec_;
  std::vector<std::optional<std::size_t>> columns_;
  std::size_t width_ = 0;
};

// Lazily yields the records of one CSV file; memory does not grow with the
// file size.
class DatasetStream {
 public:
  struct Row {
    std::uint64_t row = 0;  // 1-based data row
    std::variant<ScenarioRecord, Malformed> value;
  };

  std::optional<Row> next();
  const std::vector<std::string>& header() const { return chunker_->header(); }

 private:
  friend DatasetStream open_dataset(const std::filesystem::path&,
                                    const OddSpec&, const Discretizer&);
  DatasetStream() = default;

  std::unique_ptr<std::ifstream> file_;
  std::unique_ptr<csv::Chunker> chunker_;
  std::unique_ptr<RecordDecoder> decoder_;
  std::unique_ptr<csv::Chunk> chunk_;
  std::unique_ptr<csv::RecordParser> parser_;
  std::uint64_t row_ = 0;
  std::vector<std::string_view> fields_;
};

// Throws DataError for an unreadable file or a missing mapped column.
DatasetStream open_dataset(const std::filesystem::path& path,
                           const OddSpec& spec, const Discretizer& discretizer);

class ProjectionGrid;

struct IngestOptions {
  OutOfRangePolicy policy = OutOfRangePolicy::skip;
  unsigned jobs = 1;
  std::optional<Representation> representation;
  // When set, per-cell counts over these two effective dimensions are
  // accumulated alongside the covered set.
  std::optional<std::pair<std::size_t, std::size_t>> projection;
};

struct IngestResult {
  CoveredSet covered;
  IngestStats stats;
  std::vector<std::uint64_t> projection_counts;  // nx * ny, x-major
};

// Ingests every file into one covered set. Chunks are processed in parallel;
// results are identical for every `jobs` value. Under the error policy the
// earliest offending row is reported.
IngestResult ingest_files(std::span<const std::filesystem::path> files,
                          const OddSpec& spec, const EffectiveDimensions& dims,
                          const CombinationSpace& space,
                          const IngestOptions& options);

}  // namespace oddcov

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

#include "oddcov/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "oddcov/errors.hpp"
#include "oddcov/format.hpp"

namespace oddcov {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Bin for one source value; clamps continuous values when allowed.
std::optional<std::uint32_t> source_bin(double value, const BinEdges& edges, bool clamp,
                                        bool& clamped) {
  if (auto bin = value_to_bin(value, edges)) return bin;
  if (!clamp || edges.categorical() || !std::isfinite(value)) return std::nullopt;
  clamped = true;
  return value < edges.range_min() ? 0u : edges.size() - 1;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Discretizer::Discretizer(const OddSpec& spec, const EffectiveDimensions& dims,
                         OutOfRangePolicy policy)
    : dims_(&dims), required_(spec.parameters.size(), false), policy_(policy) {
  for (const auto& d : dims.dims) {
    if (d.kind == DimensionKind::collapsed) continue;
    for (std::size_t s : d.sources) required_[s] = true;
  }
}

RecordOutcome Discretizer::record_to_combo(const ScenarioRecord& record,
                                           const CombinationSpace& space,
                                           std::span<std::uint32_t> bins,
                                           bool& clamped) const {
  clamped = false;
  const bool clamp = policy_ == OutOfRangePolicy::clamp;
  const auto& edges = dims_->parameter_edges;
  OutOfRange oor;
  for (std::size_t d = 0; d < dims_->dims.size(); ++d) {
    const EffectiveDimension& dim = dims_->dims[d];
    switch (dim.kind) {
      case DimensionKind::binned:
      case DimensionKind::categorical: {
        const std::size_t s = dim.sources.front();
        if (auto b = source_bin(record.values[s], edges[s], clamp, clamped)) {
          bins[d] = *b;
        } else {
          oor.parameters.push_back(s);
        }
        break;
      }
      case DimensionKind::collapsed:
        // Present values must still lie inside the ODD.
        for (std::size_t s : dim.sources) {
          if (std::isnan(record.values[s])) continue;
          if (!source_bin(record.values[s], edges[s], clamp, clamped)) {
            oor.parameters.push_back(s);
          }
        }
        bins[d] = 0;
        break;
      case DimensionKind::mapped: {
        std::uint64_t linear = 0;
        bool ok = true;
        for (std::size_t k = 0; k < dim.sources.size(); ++k) {
          const std::size_t s = dim.sources[k];
          auto b = source_bin(record.values[s], edges[s], clamp, clamped);
          if (!b) {
            oor.parameters.push_back(s);
            ok = false;
            continue;
          }
          linear = linear * dim.source_radices[k] + *b;
        }
        if (ok) bins[d] = dim.table[linear];
        break;
      }
    }
  }
  if (!oor.parameters.empty()) {
    std::sort(oor.parameters.begin(), oor.parameters.end());
    return oor;
  }
  return space.encode(bins);
}

RecordOutcome Discretizer::record_to_combo(const ScenarioRecord& record,
                                           const CombinationSpace& space,
                                           std::span<std::uint32_t> bins) const {
  bool clamped = false;
  return record_to_combo(record, space, bins, clamped);
}

RecordOutcome Discretizer::record_to_combo(const ScenarioRecord& record,
                                           const CombinationSpace& space) const {
  std::vector<std::uint32_t> bins(space.rank());
  return record_to_combo(record, space, bins);
}

RecordDecoder::RecordDecoder(const OddSpec& spec, const Discretizer& discretizer,
                             const std::vector<std::string>& header, const std::string& source)
    : spec_(&spec), columns_(spec.parameters.size()), width_(header.size()) {
  for (std::size_t p = 0; p < spec.parameters.size(); ++p) {
    const std::string& name = spec.parameters[p].name;
    const std::string column = spec.column_for(name);
    const auto it = std::find(header.begin(), header.end(), column);
    if (it != header.end()) {
      columns_[p] = static_cast<std::size_t>(it - header.begin());
      continue;
    }
    const bool mapped = std::any_of(spec.dataset_mapping.begin(), spec.dataset_mapping.end(),
                                    [&](const auto& m) { return m.first == name; });
    if (mapped || discretizer.required()[p]) {
      throw DataError(source + ": missing column '" + column + "' for parameter '" + name + "'");
    }
  }
}

std::variant<ScenarioRecord, Malformed> RecordDecoder::decode(
    std::span<const std::string_view> fields) const {
  if (fields.size() != width_) {
    return Malformed{"expected " + std::to_string(width_) + " fields, got " +
                     std::to_string(fields.size())};
  }
  ScenarioRecord record;
  record.values.assign(columns_.size(), kMissing);
  for (std::size_t p = 0; p < columns_.size(); ++p) {
    if (!columns_[p]) continue;
    const ParameterSpec& param = spec_->parameters[p];
    const std::string_view text = trim(fields[*columns_[p]]);
    if (param.continuous()) {
      double v = 0.0;
      const char* first = text.data();
      if (!text.empty() && text.front() == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
          !std::isfinite(v)) {
        return Malformed{"parameter '" + param.name + "': not a finite number '" +
                         std::string(text) + "'"};
      }
      record.values[p] = v;
    } else {
      const auto it = std::find(param.levels.begin(), param.levels.end(), text);
      if (it != param.levels.end()) {
        record.values[p] = static_cast<double>(it - param.levels.begin());
        continue;
      }
      std::size_t index = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), index);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
          index >= param.levels.size()) {
        return Malformed{"parameter '" + param.name + "': unknown level '" + std::string(text) +
                         "'"};
      }
      record.values[p] = static_cast<double>(index);
    }
  }
  return record;
}

DatasetStream open_dataset(const std::filesystem::path& path, const OddSpec& spec,
                           const Discretizer& discretizer) {
  DatasetStream stream;
  stream.file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*stream.file_) throw DataError("cannot read dataset '" + path.string() + "'");
  stream.chunker_ = std::make_unique<csv::Chunker>(*stream.file_);
  if (stream.chunker_->header().empty()) {
    throw DataError(path.string() + ": missing header row");
  }
  stream.decoder_ = std::make_unique<RecordDecoder>(spec, discretizer,
                                                    stream.chunker_->header(), path.string());
  return stream;
}

std::optional<DatasetStream::Row> DatasetStream::next() {
  while (true) {
    if (!parser_) {
      auto chunk = chunker_->next();
      if (!chunk) return std::nullopt;
      chunk_ = std::make_unique<csv::Chunk>(std::move(*chunk));
      parser_ = std::make_unique<csv::RecordParser>(chunk_->bytes);
      row_ = chunk_->first_row;
    }
    bool well_formed = true;
    if (!parser_->next(fields_, well_formed)) {
      parser_.reset();
      continue;
    }
    const std::uint64_t row = row_++;
    if (parser_->blank()) continue;
    if (!well_formed) return Row{row, Malformed{"bad quoting"}};
    return Row{row, decoder_->decode(fields_)};
  }
}

namespace {

struct ChunkResult {
  std::vector<ComboIndex> combos;
  std::vector<std::uint64_t> cells;
  IngestStats stats;
  std::optional<std::string> error;
};

IngestStats empty_stats(const OddSpec& spec) {
  IngestStats stats;
  for (const auto& p : spec.parameters) stats.out_of_range_by_parameter.emplace_back(p.name, 0);
  return stats;
}

ChunkResult process_chunk(const csv::Chunk& chunk, const std::string& source,
                          const OddSpec& spec, const EffectiveDimensions& dims,
                          const CombinationSpace& space, const Discretizer& discretizer,
                          const RecordDecoder& decoder, const IngestOptions& options) {
  ChunkResult out;
  out.stats = empty_stats(spec);
  csv::RecordParser parser(chunk.bytes);
  std::vector<std::string_view> fields;
  std::vector<std::uint32_t> bins(space.rank());
  std::uint64_t row = chunk.first_row;
  std::size_t ny = 0;
  if (options.projection) ny = dims.dims[options.projection->second].bin_count;
  bool well_formed = true;
  while (parser.next(fields, well_formed)) {
    const std::uint64_t this_row = row++;
    if (parser.blank()) continue;
    ++out.stats.rows_read;
    if (!well_formed) {
      ++out.stats.rows_malformed;
      continue;
    }
    auto decoded = decoder.decode(fields);
    if (std::holds_alternative<Malformed>(decoded)) {
      ++out.stats.rows_malformed;
      continue;
    }
    bool clamped = false;
    const RecordOutcome outcome =
        discretizer.record_to_combo(std::get<ScenarioRecord>(decoded), space, bins, clamped);
    if (const auto* oor = std::get_if<OutOfRange>(&outcome)) {
      if (options.policy == OutOfRangePolicy::error) {
        const std::size_t p = oor->parameters.front();
        out.error = source + ": row " + std::to_string(this_row) + ": parameter '" +
                    spec.parameters[p].name + "' value " +
                    format_real(std::get<ScenarioRecord>(decoded).values[p]) +
                    " is outside the ODD range";
        return out;
      }
      ++out.stats.rows_out_of_range;
      for (std::size_t p : oor->parameters) ++out.stats.out_of_range_by_parameter[p].second;
      continue;
    }
    ++out.stats.rows_mapped;
    out.stats.rows_clamped += clamped;
    out.combos.push_back(std::get<ComboIndex>(outcome));
    if (options.projection) {
      out.cells.push_back(bins[options.projection->first] * ny + bins[options.projection->second]);
    }
  }
  return out;
}

}  // namespace

IngestResult ingest_files(std::span<const std::filesystem::path> files, const OddSpec& spec,
                          const EffectiveDimensions& dims, const CombinationSpace& space,
                          const IngestOptions& options) {
  IngestResult result{CoveredSet(space.total(), spec_hash(spec), options.representation),
                      empty_stats(spec), {}};
  if (options.projection) {
    result.projection_counts.assign(
        std::size_t{dims.dims[options.projection->first].bin_count} *
            dims.dims[options.projection->second].bin_count,
        0);
  }
  const Discretizer discretizer(spec, dims, options.policy);
  const unsigned jobs = std::max(1u, options.jobs);

  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read dataset '" + path.string() + "'");
    csv::Chunker chunker(in);
    if (chunker.header().empty()) throw DataError(path.string() + ": missing header row");
    const std::string source = path.string();
    const RecordDecoder decoder(spec, discretizer, chunker.header(), source);

    bool done = false;
    while (!done) {
      std::vector<csv::Chunk> wave;
      while (wave.size() < jobs) {
        auto chunk = chunker.next();
        if (!chunk) {
          done = true;
          break;
        }
        wave.push_back(std::move(*chunk));
      }
      if (wave.empty()) break;
      std::vector<ChunkResult> partial(wave.size());
      std::vector<std::exception_ptr> failures(wave.size());
      auto run = [&](std::size_t k) {
        try {
          partial[k] = process_chunk(wave[k], source, spec, dims, space, discretizer, decoder,
                                     options);
        } catch (...) {
          failures[k] = std::current_exception();
        }
      };
      {
        std::vector<std::jthread> threads;
        for (std::size_t k = 1; k < wave.size(); ++k) threads.emplace_back(run, k);
        run(0);
      }
      for (std::size_t k = 0; k < partial.size(); ++k) {
        if (failures[k]) std::rethrow_exception(failures[k]);
        const ChunkResult& p = partial[k];
        if (p.error) throw DataError(*p.error);
        for (ComboIndex c : p.combos) result.covered.mark(c);
        for (std::uint64_t cell : p.cells) ++result.projection_counts[cell];
        result.stats += p.stats;
      }
    }
  }
  return result;
}

}  // namespace oddcov

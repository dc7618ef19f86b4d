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

#include "oddcov/coverage.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "oddcov/errors.hpp"
#include "oddcov/parallel.hpp"

namespace oddcov {

Representation choose_representation(std::uint64_t total) {
  return total <= (std::uint64_t{1} << 31) ? Representation::dense : Representation::sparse;
}

CoveredSet::CoveredSet(std::uint64_t total, std::string spec_hash,
                       std::optional<Representation> representation)
    : total_(total),
      spec_hash_(std::move(spec_hash)),
      representation_(representation.value_or(choose_representation(total))) {
  if (representation_ == Representation::dense) words_.assign((total_ + 63) / 64, 0);
}

void CoveredSet::mark(ComboIndex index) {
  if (index >= total_) throw std::out_of_range("combination index out of range");
  if (representation_ == Representation::dense) {
    std::uint64_t& word = words_[index >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (index & 63);
    count_ += (word & bit) == 0;
    word |= bit;
  } else {
    count_ += sparse_.insert(index).second;
  }
}

bool CoveredSet::contains(ComboIndex index) const {
  if (index >= total_) return false;
  if (representation_ == Representation::dense) {
    return (words_[index >> 6] >> (index & 63)) & 1;
  }
  return sparse_.contains(index);
}

void require_hash(const CoveredSet& set, const std::string& expected_hash) {
  if (set.spec_hash() != expected_hash) {
    throw HashMismatch("spec hash mismatch: covered set was built under " + set.spec_hash() +
                       ", current spec is " + expected_hash);
  }
}

void CoveredSet::merge(const CoveredSet& other) {
  require_hash(other, spec_hash_);
  if (other.total_ != total_) throw SpecError("covered sets over different spaces");
  if (representation_ == Representation::dense &&
      other.representation_ == Representation::dense) {
    count_ = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      words_[i] |= other.words_[i];
      count_ += std::popcount(words_[i]);
    }
    return;
  }
  other.for_each([this](ComboIndex i) { mark(i); });
}

void CoveredSet::for_each(const std::function<void(ComboIndex)>& fn) const {
  if (representation_ == Representation::sparse) {
    for (ComboIndex i : sparse_) fn(i);
    return;
  }
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      fn(w * 64 + std::countr_zero(word));
      word &= word - 1;
    }
  }
}

std::vector<ComboIndex> CoveredSet::members() const {
  std::vector<ComboIndex> out;
  out.reserve(count_);
  for_each([&](ComboIndex i) { out.push_back(i); });
  return out;
}

namespace {

constexpr char kMagic[8] = {'O', 'D', 'D', 'C', 'O', 'V', 'C', 'S'};
constexpr std::uint32_t kSidecarVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw DataError("truncated covered-set file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError("truncated covered-set file");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

void CoveredSet::write(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kSidecarVersion);
  put_u32(out, static_cast<std::uint32_t>(spec_hash_.size()));
  out.write(spec_hash_.data(), static_cast<std::streamsize>(spec_hash_.size()));
  put_u64(out, total_);
  out.put(representation_ == Representation::dense ? 'D' : 'S');
  put_u64(out, count_);
  if (representation_ == Representation::dense) {
    for (std::uint64_t w : words_) put_u64(out, w);
  } else {
    for (ComboIndex i : sparse_) put_u64(out, i);
  }
}

CoveredSet CoveredSet::read(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kMagic)) {
    throw DataError("not a covered-set file");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kSidecarVersion) {
    throw DataError("unsupported covered-set version " + std::to_string(version));
  }
  const std::uint32_t hash_len = get_u32(in);
  if (hash_len > 256) throw DataError("corrupt covered-set header");
  std::string hash(hash_len, '\0');
  if (!in.read(hash.data(), hash_len)) throw DataError("truncated covered-set file");
  const std::uint64_t total = get_u64(in);
  const int tag = in.get();
  if (tag != 'D' && tag != 'S') throw DataError("corrupt covered-set representation");
  const auto rep = tag == 'D' ? Representation::dense : Representation::sparse;
  const std::uint64_t count = get_u64(in);
  CoveredSet set(total, std::move(hash), rep);
  if (rep == Representation::dense) {
    for (auto& w : set.words_) w = get_u64(in);
    if (total % 64 != 0 && !set.words_.empty() && (set.words_.back() >> (total % 64)) != 0) {
      throw DataError("corrupt covered-set payload");
    }
    set.count_ = 0;
    for (auto w : set.words_) set.count_ += std::popcount(w);
  } else {
    for (std::uint64_t k = 0; k < count; ++k) {
      const std::uint64_t i = get_u64(in);
      if (i >= total) throw DataError("corrupt covered-set payload");
      set.mark(i);
    }
  }
  if (set.count_ != count) throw DataError("corrupt covered-set count");
  return set;
}

void CoveredSet::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write(out);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

CoveredSet CoveredSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read covered set '" + path.string() + "'; run analyze first");
  try {
    return read(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

CoveredSet set_union(const CoveredSet& a, const CoveredSet& b) {
  CoveredSet out = a;
  out.merge(b);
  return out;
}

IngestStats& IngestStats::operator+=(const IngestStats& other) {
  rows_read += other.rows_read;
  rows_mapped += other.rows_mapped;
  rows_out_of_range += other.rows_out_of_range;
  rows_malformed += other.rows_malformed;
  rows_clamped += other.rows_clamped;
  if (out_of_range_by_parameter.empty()) {
    out_of_range_by_parameter = other.out_of_range_by_parameter;
  } else {
    for (std::size_t i = 0; i < other.out_of_range_by_parameter.size() &&
                            i < out_of_range_by_parameter.size();
         ++i) {
      out_of_range_by_parameter[i].second += other.out_of_range_by_parameter[i].second;
    }
  }
  return *this;
}

namespace {
constexpr std::uint64_t kBlock = 1 << 16;

void require_same_space(const CoveredSet& set, const CombinationSpace& space) {
  if (set.total() != space.total()) {
    throw SpecError("covered set has " + std::to_string(set.total()) +
                    " combinations, space has " + std::to_string(space.total()));
  }
}
}  // namespace

CoverageReport compute_report(const CoveredSet& set, const CombinationSpace& space,
                              const RelevanceFilter& filter, unsigned jobs) {
  require_same_space(set, space);
  CoverageReport report;
  report.total = space.total();
  report.covered_total = set.count();
  if (filter.unconstrained()) {
    report.relevant = report.total;
    report.covered_relevant = report.covered_total;
  } else {
    struct Partial {
      std::uint64_t relevant = 0;
      std::uint64_t covered = 0;
    };
    ordered_parallel_for(
        space.total(), jobs, kBlock,
        [&](std::uint64_t begin, std::uint64_t end) {
          Partial p;
          scan_relevance(space, filter, begin, end, [&](ComboIndex i, bool relevant) {
            if (relevant) {
              ++p.relevant;
              p.covered += set.contains(i);
            }
          });
          return p;
        },
        [&](Partial p) {
          report.relevant += p.relevant;
          report.covered_relevant += p.covered;
        });
  }
  report.gap_count = report.relevant - report.covered_relevant;
  report.r_cov = report.relevant == 0
                     ? 1.0
                     : static_cast<double>(report.covered_relevant) / report.relevant;
  report.r_cov_unconstrained = static_cast<double>(report.covered_total) / report.total;
  return report;
}

std::uint64_t list_gaps(const CoveredSet& set, const CombinationSpace& space,
                        const RelevanceFilter& filter, std::optional<std::uint64_t> limit,
                        unsigned jobs, const std::function<void(ComboIndex)>& sink) {
  require_same_space(set, space);
  std::uint64_t emitted = 0;
  if (limit && *limit == 0) return 0;
  ordered_parallel_for(
      space.total(), jobs, kBlock,
      [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<ComboIndex> gaps;
        scan_relevance(space, filter, begin, end, [&](ComboIndex i, bool relevant) {
          if (relevant && !set.contains(i)) gaps.push_back(i);
        });
        return gaps;
      },
      [&](std::vector<ComboIndex>&& gaps) {
        for (ComboIndex i : gaps) {
          sink(i);
          if (limit && ++emitted == *limit) return false;
          if (!limit) ++emitted;
        }
        return true;
      });
  return emitted;
}

std::vector<ComboIndex> list_gaps(const CoveredSet& set, const CombinationSpace& space,
                                  const RelevanceFilter& filter,
                                  std::optional<std::uint64_t> limit, unsigned jobs) {
  std::vector<ComboIndex> out;
  list_gaps(set, space, filter, limit, jobs, [&](ComboIndex i) { out.push_back(i); });
  return out;
}

}  // namespace oddcov

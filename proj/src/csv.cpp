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

#include "oddcov/csv.hpp"

#include <algorithm>

namespace oddcov::csv {

Chunker::Chunker(std::istream& in, std::size_t chunk_bytes)
    : in_(in), chunk_bytes_(std::max<std::size_t>(chunk_bytes, 64)) {
  // Grow until the first record is complete.
  std::size_t cut = std::string::npos;
  while (true) {
    cut = std::string::npos;
    bool quoted = false;
    for (std::size_t i = 0; i < buffer_.size(); ++i) {
      if (buffer_[i] == '"') {
        quoted = !quoted;
      } else if (buffer_[i] == '\n' && !quoted) {
        cut = i + 1;
        break;
      }
    }
    if (cut != std::string::npos || !fill()) break;
  }
  if (buffer_.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    buffer_.erase(0, 3);
    if (cut != std::string::npos) cut -= 3;
  }
  if (buffer_.empty()) return;
  const std::size_t end = cut == std::string::npos ? buffer_.size() : cut;
  RecordParser parser(std::string_view(buffer_).substr(0, end));
  std::vector<std::string_view> fields;
  bool ok = true;
  if (parser.next(fields, ok)) header_.assign(fields.begin(), fields.end());
  buffer_.erase(0, end);
}

bool Chunker::fill() {
  if (eof_) return false;
  const std::size_t old = buffer_.size();
  buffer_.resize(old + chunk_bytes_);
  in_.read(buffer_.data() + old, static_cast<std::streamsize>(chunk_bytes_));
  const auto got = static_cast<std::size_t>(in_.gcount());
  buffer_.resize(old + got);
  if (got < chunk_bytes_) eof_ = true;
  return got > 0;
}

std::size_t Chunker::last_boundary(std::uint64_t& records) const {
  std::size_t cut = std::string::npos;
  std::uint64_t count = 0;
  bool quoted = false;
  const char* data = buffer_.data();
  for (std::size_t i = 0, n = buffer_.size(); i < n; ++i) {
    const char ch = data[i];
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == '\n' && !quoted) {
      ++count;
      cut = i + 1;
      records = count;
    }
  }
  return cut;
}

std::optional<Chunk> Chunker::next() {
  while (!eof_ && buffer_.size() < chunk_bytes_) {
    if (!fill()) break;
  }
  while (true) {
    if (buffer_.empty()) return std::nullopt;
    std::uint64_t records = 0;
    std::size_t cut = last_boundary(records);
    if (eof_) {
      // Whatever is left, including an unterminated final record.
      if (cut != buffer_.size()) ++records;
      cut = buffer_.size();
    } else if (cut == std::string::npos) {
      fill();
      continue;
    }
    Chunk chunk;
    chunk.first_row = next_row_;
    next_row_ += records;
    chunk.bytes.assign(buffer_, 0, cut);
    buffer_.erase(0, cut);
    return chunk;
  }
}

bool RecordParser::next(std::vector<std::string_view>& fields, bool& well_formed) {
  fields.clear();
  scratch_.clear();
  well_formed = true;
  blank_ = false;
  if (rest_.empty()) return false;

  if (rest_[0] == '\n' || (rest_.size() >= 2 && rest_[0] == '\r' && rest_[1] == '\n') ||
      (rest_.size() == 1 && rest_[0] == '\r')) {
    blank_ = true;
    fields.emplace_back();
    rest_.remove_prefix(rest_[0] == '\n' ? 1 : std::min<std::size_t>(2, rest_.size()));
    return true;
  }

  std::size_t pos = 0;
  const std::size_t n = rest_.size();
  while (true) {
    bool end_of_record = false;
    if (pos < n && rest_[pos] == '"') {
      std::size_t i = pos + 1;
      bool escaped = false;
      bool closed = false;
      while (i < n) {
        if (rest_[i] == '"') {
          if (i + 1 < n && rest_[i + 1] == '"') {
            escaped = true;
            i += 2;
            continue;
          }
          closed = true;
          break;
        }
        ++i;
      }
      std::string_view body = rest_.substr(pos + 1, i - pos - 1);
      if (escaped) {
        std::string& s = scratch_.emplace_back();
        s.reserve(body.size());
        for (std::size_t k = 0; k < body.size(); ++k) {
          s += body[k];
          if (body[k] == '"') ++k;
        }
        fields.emplace_back(s);
      } else {
        fields.push_back(body);
      }
      if (!closed) {
        well_formed = false;
        pos = n;
        end_of_record = true;
      } else {
        pos = i + 1;
        // Only a delimiter or a line end may follow the closing quote.
        std::size_t k = pos;
        while (k < n && rest_[k] != ',' && rest_[k] != '\n') ++k;
        const std::string_view tail = rest_.substr(pos, k - pos);
        if (!(tail.empty() || tail == "\r")) well_formed = false;
        pos = k;
        if (pos >= n || rest_[pos] == '\n') {
          end_of_record = true;
          pos = std::min(n, pos + 1);
        } else {
          ++pos;
        }
      }
    } else {
      std::size_t k = pos;
      while (k < n && rest_[k] != ',' && rest_[k] != '\n') ++k;
      std::string_view field = rest_.substr(pos, k - pos);
      if (k >= n || rest_[k] == '\n') {
        if (!field.empty() && field.back() == '\r') field.remove_suffix(1);
        end_of_record = true;
        pos = std::min(n, k + 1);
      } else {
        pos = k + 1;
      }
      fields.push_back(field);
    }
    if (end_of_record) break;
  }
  rest_.remove_prefix(std::min(pos, n));
  return true;
}

std::vector<std::vector<std::string>> parse_all(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  RecordParser parser(text);
  std::vector<std::string_view> fields;
  bool ok = true;
  while (parser.next(fields, ok)) {
    if (parser.blank()) continue;
    out.emplace_back(fields.begin(), fields.end());
  }
  return out;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace oddcov::csv

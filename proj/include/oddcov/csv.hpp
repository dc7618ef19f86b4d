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

// RFC 4180 reading: quoted fields, doubled quotes, CRLF or LF line ends.

#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oddcov::csv {

// A run of complete records cut from the input.
struct Chunk {
  std::string bytes;
  std::uint64_t first_row = 0;  // 1-based data row number of the first record
};

// Reads the stream in fixed-size pieces and cuts them at record boundaries
// (tracking quote state), so chunks can be parsed independently.
class Chunker {
 public:
  explicit Chunker(std::istream& in, std::size_t chunk_bytes = 1 << 22);

  // Header fields (UTF-8 BOM stripped). Empty if the stream was empty.
  const std::vector<std::string>& header() const { return header_; }
  std::optional<Chunk> next();

 private:
  bool fill();
  // Position just past the last record terminator in buffer_, counting the
  // records before it; npos if none.
  std::size_t last_boundary(std::uint64_t& records) const;

  std::istream& in_;
  std::size_t chunk_bytes_;
  std::string buffer_;
  bool eof_ = false;
  std::uint64_t next_row_ = 1;
  std::vector<std::string> header_;
};

// Splits one chunk into records. `fields` views into `chunk` or into
// internal storage (for unescaped quoted fields) and stays valid until the
// next call.
class RecordParser {
 public:
  explicit RecordParser(std::string_view chunk) : rest_(chunk) {}

  // false at end of chunk. Sets `well_formed` false for an unterminated
  // quote or stray characters after a closing quote.
  bool next(std::vector<std::string_view>& fields, bool& well_formed);

  // The last record was an empty line.
  bool blank() const { return blank_; }

 private:
  std::string_view rest_;
  std::deque<std::string> scratch_;
  bool blank_ = false;
};

// Convenience for small inputs and tests.
std::vector<std::vector<std::string>> parse_all(std::string_view text);

// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

}  // namespace oddcov::csv

// Copyright 2026 The Somno Authors.
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

#include <cstdlib>
#include <string>

#include "somno/edf.h"
#include "somno/error.h"

namespace somno {
namespace {

constexpr std::uint8_t kDurationMark = 0x15;
constexpr std::uint8_t kFieldEnd = 0x14;

double parse_tal_number(const std::string& text, bool signed_required,
                        std::int64_t record_index) {
  if (text.empty()) throw ParseError("empty TAL time field", record_index, ParseError::Unit::kRecord);
  if (signed_required && text.front() != '+' && text.front() != '-') {
    throw ParseError("TAL onset '" + text + "' lacks a leading sign",
                     record_index, ParseError::Unit::kRecord);
  }
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool sign = (c == '+' || c == '-') && i == 0;
    if (!sign && c != '.' && (c < '0' || c > '9')) {
      throw ParseError("malformed TAL time '" + text + "'", record_index,
                       ParseError::Unit::kRecord);
    }
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw ParseError("malformed TAL time '" + text + "'", record_index,
                     ParseError::Unit::kRecord);
  }
  return v;
}

}  // namespace

// TAL grammar: [+-]onset [0x15 duration] 0x14 (text 0x14)* 0x00
std::vector<Annotation> parse_tal_block(std::span<const std::uint8_t> bytes,
                                        std::int64_t record_index) {
  std::vector<Annotation> out;
  std::size_t pos = 0;
  const std::size_t n = bytes.size();
  const auto fail = [&](const std::string& what) {
    throw ParseError(what, record_index, ParseError::Unit::kRecord);
  };

  while (pos < n) {
    if (bytes[pos] == 0x00) {
      ++pos;
      continue;
    }
    std::string onset;
    while (pos < n && bytes[pos] != kDurationMark && bytes[pos] != kFieldEnd &&
           bytes[pos] != 0x00) {
      onset.push_back(static_cast<char>(bytes[pos++]));
    }
    if (pos >= n || bytes[pos] == 0x00) fail("TAL onset not terminated");
    Annotation base;
    base.onset_s = parse_tal_number(onset, true, record_index);
    if (bytes[pos] == kDurationMark) {
      ++pos;
      std::string duration;
      while (pos < n && bytes[pos] != kFieldEnd && bytes[pos] != 0x00 &&
             bytes[pos] != kDurationMark) {
        duration.push_back(static_cast<char>(bytes[pos++]));
      }
      if (pos >= n || bytes[pos] != kFieldEnd) {
        fail("TAL duration not terminated by 0x14");
      }
      base.duration_s = parse_tal_number(duration, false, record_index);
    }
    ++pos;  // 0x14 after onset/duration

    // Annotation texts until the terminating 0x00.
    bool closed = false;
    while (pos < n) {
      if (bytes[pos] == 0x00) {
        ++pos;
        closed = true;
        break;
      }
      std::string text;
      while (pos < n && bytes[pos] != kFieldEnd && bytes[pos] != 0x00) {
        text.push_back(static_cast<char>(bytes[pos++]));
      }
      if (pos >= n || bytes[pos] != kFieldEnd) {
        fail("TAL annotation text not terminated by 0x14");
      }
      ++pos;
      if (!text.empty()) {
        Annotation a = base;
        a.text = std::move(text);
        out.push_back(std::move(a));
      }
    }
    if (!closed) fail("TAL not terminated by 0x00");
  }
  return out;
}

}  // namespace somno

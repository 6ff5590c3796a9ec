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

#ifndef SOMNO_ERROR_H_
#define SOMNO_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace somno {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input bytes. `offset` is the byte offset (or record index for
// record-level errors, see `unit()`) at which decoding failed.
class ParseError : public Error {
 public:
  enum class Unit { kByte, kRecord, kLine };

  ParseError(const std::string& message, std::int64_t offset,
             Unit unit = Unit::kByte);

  std::int64_t offset() const { return offset_; }
  Unit unit() const { return unit_; }

 private:
  std::int64_t offset_;
  Unit unit_;
};

}  // namespace somno

#endif  // SOMNO_ERROR_H_

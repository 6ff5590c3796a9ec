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

#include "somno/error.h"

namespace somno {
namespace {

std::string decorate(const std::string& message, std::int64_t offset,
                     ParseError::Unit unit) {
  switch (unit) {
    case ParseError::Unit::kByte:
      return message + " (at byte offset " + std::to_string(offset) + ")";
    case ParseError::Unit::kRecord:
      return message + " (in data record " + std::to_string(offset) + ")";
    case ParseError::Unit::kLine:
      return message + " (on line " + std::to_string(offset) + ")";
  }
  return message;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::int64_t offset,
                       Unit unit)
    : Error(decorate(message, offset, unit)), offset_(offset), unit_(unit) {}

}  // namespace somno

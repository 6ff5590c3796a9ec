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

#ifndef SOMNO_TOOLS_LOG_H_
#define SOMNO_TOOLS_LOG_H_

#include <chrono>
#include <string_view>

#include <json.hpp>

namespace somno::cli {

// One JSON object per line on stderr: {"ts", "level", "event", ...fields}.
void log_event(std::string_view level, std::string_view event,
               nlohmann::ordered_json fields = nlohmann::ordered_json::object());

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace somno::cli

#endif  // SOMNO_TOOLS_LOG_H_

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

#ifndef SOMNO_TOOLS_COMMANDS_H_
#define SOMNO_TOOLS_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <string>

#include "config.h"

namespace somno::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_inspect(const std::filesystem::path& edf);
int cmd_extract(const RunConfig& cfg, bool force);
int cmd_train(const RunConfig& cfg, const std::optional<std::filesystem::path>& model_out);
int cmd_evaluate(const RunConfig& cfg);
// Exactly one of recording_id / features is set.
int cmd_predict(const RunConfig& cfg, const std::filesystem::path& model,
                const std::optional<std::string>& recording_id,
                const std::optional<std::filesystem::path>& features,
                const std::optional<std::filesystem::path>& output);
int cmd_project(const RunConfig& cfg, const std::optional<std::filesystem::path>& output);

}  // namespace somno::cli

#endif  // SOMNO_TOOLS_COMMANDS_H_

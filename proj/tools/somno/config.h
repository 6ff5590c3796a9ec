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

#ifndef SOMNO_TOOLS_CONFIG_H_
#define SOMNO_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "somno/features.h"
#include "somno/montage.h"
#include "somno/pipeline.h"
#include "somno/preprocess.h"

namespace somno::cli {

// A usage or configuration problem (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RecordingSource {
  std::filesystem::path psg;
  std::filesystem::path hypnogram;  // .csv sidecar or EDF+ annotation file
  std::string subject_id;
  std::string recording_id;
};

struct RunConfig {
  nlohmann::ordered_json effective;  // defaults merged with file and overrides
  std::string config_digest;
  std::filesystem::path base_dir;

  std::string dataset_name;
  std::vector<RecordingSource> recordings;
  std::string montage_name;
  Montage montage;
  bool trim_wake = false;

  PreprocessConfig preprocess;
  FeatureParams features;
  bool write_csv = false;

  PipelineOptions model;

  std::string protocol = "LFS";
  int k = 0;  // 0 = one fold per subject
  std::filesystem::path train_features_dir;
  std::vector<std::string> exclude_subjects;
  bool allow_overlap = false;

  std::filesystem::path output_dir;
  int parallelism = 1;
  std::uint64_t seed = 0;

  std::filesystem::path features_dir() const { return output_dir / "features"; }
  std::filesystem::path labels_dir() const { return output_dir / "labels"; }
  std::filesystem::path features_path(const std::string& recording_id) const {
    return features_dir() / (recording_id + ".f64");
  }
  // Digest of everything that shapes a feature matrix except the inputs.
  std::string extraction_settings_digest() const;
};

nlohmann::ordered_json default_config();

// Reads `path`, merges it over the defaults, applies `key.path=value`
// overrides, validates, and resolves relative paths against the config
// file's directory. Throws UsageError on any problem.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides);

}  // namespace somno::cli

#endif  // SOMNO_TOOLS_CONFIG_H_

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

#ifndef SOMNO_PIPELINE_H_
#define SOMNO_PIPELINE_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "somno/logistic.h"
#include "somno/matrix.h"
#include "somno/quantile.h"
#include "somno/stage.h"

namespace somno {

struct PipelineOptions {
  int n_quantiles = kDefaultQuantiles;
  LogisticOptions logistic;
};

// Quantile transform followed by multinomial logistic regression over the
// five model classes (W, N1, N2, N3, REM).
class LinearPipelineModel {
 public:
  static constexpr int kFormatVersion = 1;

  static LinearPipelineModel fit(const RowMatrix& x, std::span<const SleepStage> y,
                                 const std::string& schema_hash,
                                 const PipelineOptions& options = {});

  // All of these refuse a schema hash different from the fitted one.
  RowMatrix transform(const RowMatrix& x, const std::string& schema_hash) const;
  RowMatrix predict_proba(const RowMatrix& x, const std::string& schema_hash) const;
  std::vector<SleepStage> predict(const RowMatrix& x, const std::string& schema_hash) const;

  const std::string& schema_hash() const { return schema_hash_; }
  const QuantileTransform& quantile() const { return quantile_; }
  const LogisticModel& logistic() const { return logistic_; }
  double l2_strength() const { return l2_; }
  std::map<std::string, std::string>& training_meta() { return meta_; }
  const std::map<std::string, std::string>& training_meta() const { return meta_; }

  std::string to_json() const;
  static LinearPipelineModel from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static LinearPipelineModel load(const std::filesystem::path& path);

 private:
  void check_schema(const std::string& schema_hash) const;

  std::string schema_hash_;
  QuantileTransform quantile_;
  LogisticModel logistic_;
  double l2_ = 1.0;
  std::map<std::string, std::string> meta_;
};

// Class index of the most probable model class per row.
std::vector<SleepStage> argmax_stages(const RowMatrix& proba);

}  // namespace somno

#endif  // SOMNO_PIPELINE_H_

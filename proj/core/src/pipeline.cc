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

#include "somno/pipeline.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "somno/error.h"

namespace somno {
namespace {

std::string exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_exact(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error("bad decimal '" + s + "' in model file");
  return v;
}

}  // namespace

LinearPipelineModel LinearPipelineModel::fit(const RowMatrix& x,
                                             std::span<const SleepStage> y,
                                             const std::string& schema_hash,
                                             const PipelineOptions& options) {
  LinearPipelineModel m;
  m.schema_hash_ = schema_hash;
  m.l2_ = options.logistic.l2;
  m.quantile_ = QuantileTransform::fit(x, options.n_quantiles, options.logistic.workers);
  const RowMatrix t = m.quantile_.apply(x, options.logistic.workers);
  const std::vector<int> labels = to_class_indices(y);
  m.logistic_ = fit_logistic(t, labels, kNumClasses, options.logistic);
  return m;
}

void LinearPipelineModel::check_schema(const std::string& schema_hash) const {
  if (schema_hash != schema_hash_) {
    throw Error("feature schema " + schema_hash.substr(0, 12) +
                " does not match the model's schema " + schema_hash_.substr(0, 12));
  }
}

RowMatrix LinearPipelineModel::transform(const RowMatrix& x,
                                         const std::string& schema_hash) const {
  check_schema(schema_hash);
  return quantile_.apply(x);
}

RowMatrix LinearPipelineModel::predict_proba(const RowMatrix& x,
                                             const std::string& schema_hash) const {
  return logistic_.predict_proba(transform(x, schema_hash));
}

std::vector<SleepStage> LinearPipelineModel::predict(const RowMatrix& x,
                                                     const std::string& schema_hash) const {
  return argmax_stages(predict_proba(x, schema_hash));
}

std::vector<SleepStage> argmax_stages(const RowMatrix& proba) {
  std::vector<SleepStage> out(static_cast<std::size_t>(proba.rows()));
  for (Eigen::Index r = 0; r < proba.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < proba.cols(); ++k) {
      if (proba(r, k) > proba(r, best)) best = k;
    }
    out[r] = kModelClasses.at(static_cast<std::size_t>(best));
  }
  return out;
}

std::string LinearPipelineModel::to_json() const {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["schema_hash"] = schema_hash_;
  auto classes = nlohmann::ordered_json::array();
  for (SleepStage s : kModelClasses) classes.push_back(std::string(to_string(s)));
  j["classes"] = classes;
  const auto& ref = quantile_.references();
  auto refs = nlohmann::ordered_json::array();
  for (Eigen::Index c = 0; c < ref.cols(); ++c) {
    auto col = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < ref.rows(); ++k) col.push_back(exact(ref(k, c)));
    refs.push_back(std::move(col));
  }
  j["quantile_references"] = std::move(refs);
  auto weights = nlohmann::ordered_json::array();
  for (Eigen::Index k = 0; k < logistic_.weights.rows(); ++k) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < logistic_.weights.cols(); ++c) {
      row.push_back(exact(logistic_.weights(k, c)));
    }
    weights.push_back(std::move(row));
  }
  j["weights"] = std::move(weights);
  auto biases = nlohmann::ordered_json::array();
  for (Eigen::Index k = 0; k < logistic_.biases.size(); ++k) {
    biases.push_back(exact(logistic_.biases[k]));
  }
  j["biases"] = std::move(biases);
  j["l2_strength"] = exact(l2_);
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta_) meta[k] = v;
  meta["optimizer_iterations"] = std::to_string(logistic_.iterations);
  meta["optimizer_converged"] = logistic_.converged ? "true" : "false";
  meta["optimizer_gradient_max"] = exact(logistic_.gradient_max);
  j["training_meta"] = std::move(meta);
  return j.dump(1);
}

LinearPipelineModel LinearPipelineModel::from_json(std::string_view text) {
  LinearPipelineModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw Error("unsupported model format version " + j.at("format_version").dump());
    }
    m.schema_hash_ = j.at("schema_hash").get<std::string>();
    const auto classes = j.at("classes").get<std::vector<std::string>>();
    if (classes.size() != kModelClasses.size()) throw Error("model must list five classes");
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (parse_stage(classes[i]) != kModelClasses[i]) {
        throw Error("model classes must be in order W, N1, N2, N3, REM");
      }
    }
    const auto& refs = j.at("quantile_references");
    if (refs.empty()) throw Error("model has no quantile references");
    Eigen::MatrixXd ref(static_cast<Eigen::Index>(refs.at(0).size()),
                        static_cast<Eigen::Index>(refs.size()));
    for (std::size_t c = 0; c < refs.size(); ++c) {
      if (refs[c].size() != static_cast<std::size_t>(ref.rows())) {
        throw Error("ragged quantile reference table");
      }
      for (std::size_t k = 0; k < refs[c].size(); ++k) {
        ref(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) =
            parse_exact(refs[c][k].get<std::string>());
      }
    }
    m.quantile_ = QuantileTransform::from_references(std::move(ref));
    const auto& weights = j.at("weights");
    if (weights.size() != kModelClasses.size()) throw Error("weights must have five rows");
    m.logistic_.weights.resize(kNumClasses, m.quantile_.n_features());
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k].size() != static_cast<std::size_t>(m.quantile_.n_features())) {
        throw Error("weight row width differs from quantile table");
      }
      for (std::size_t c = 0; c < weights[k].size(); ++c) {
        m.logistic_.weights(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) =
            parse_exact(weights[k][c].get<std::string>());
      }
    }
    const auto& biases = j.at("biases");
    if (biases.size() != kModelClasses.size()) throw Error("biases must have five entries");
    m.logistic_.biases.resize(kNumClasses);
    for (std::size_t k = 0; k < biases.size(); ++k) {
      m.logistic_.biases[static_cast<Eigen::Index>(k)] =
          parse_exact(biases[k].get<std::string>());
    }
    m.l2_ = parse_exact(j.at("l2_strength").get<std::string>());
    for (const auto& [k, v] : j.at("training_meta").items()) {
      m.meta_[k] = v.get<std::string>();
    }
    if (auto it = m.meta_.find("optimizer_iterations"); it != m.meta_.end()) {
      m.logistic_.iterations = std::stoi(it->second);
      m.meta_.erase(it);
    }
    if (auto it = m.meta_.find("optimizer_converged"); it != m.meta_.end()) {
      m.logistic_.converged = it->second == "true";
      m.meta_.erase(it);
    }
    if (auto it = m.meta_.find("optimizer_gradient_max"); it != m.meta_.end()) {
      m.logistic_.gradient_max = parse_exact(it->second);
      m.meta_.erase(it);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
  return m;
}

void LinearPipelineModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json() << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

LinearPipelineModel LinearPipelineModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(buf.str());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace somno

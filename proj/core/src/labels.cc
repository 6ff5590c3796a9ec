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

#include "somno/labels.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "somno/error.h"

namespace somno {
namespace internal {
extern const std::string_view kStageAliasTable;
}  // namespace internal

namespace {

constexpr std::array<std::string_view, 8> kStageNames{
    "W", "N1", "N2", "N3", "REM", "N4", "MOVEMENT", "UNKNOWN"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

const std::map<std::string, SleepStage, std::less<>>& alias_map() {
  static const auto* table = [] {
    auto* m = new std::map<std::string, SleepStage, std::less<>>();
    std::istringstream in{std::string(internal::kStageAliasTable)};
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      std::string_view v = trim(line);
      if (v.empty()) continue;
      if (header) {
        header = false;
        continue;
      }
      const auto comma = v.rfind(',');
      if (comma == std::string_view::npos) {
        throw Error("malformed stage alias row: " + std::string(v));
      }
      m->emplace(std::string(trim(v.substr(0, comma))),
                 parse_stage(trim(v.substr(comma + 1))));
    }
    return m;
  }();
  return *table;
}

std::int64_t to_epoch(double seconds, int epoch_s) {
  return static_cast<std::int64_t>(std::llround(seconds / epoch_s));
}

}  // namespace

std::string_view to_string(SleepStage stage) {
  return kStageNames.at(static_cast<std::size_t>(stage));
}

SleepStage parse_stage(std::string_view token) {
  token = trim(token);
  for (std::size_t i = 0; i < kStageNames.size(); ++i) {
    if (token == kStageNames[i]) return static_cast<SleepStage>(i);
  }
  throw Error("unknown sleep stage '" + std::string(token) + "'");
}

std::optional<SleepStage> stage_from_annotation(std::string_view text) {
  const auto& m = alias_map();
  auto it = m.find(trim(text));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

int class_index(SleepStage s) {
  if (!is_model_class(s)) {
    throw Error("stage " + std::string(to_string(s)) + " is not a model class");
  }
  return static_cast<int>(s);
}

Hypnogram annotations_to_hypnogram(std::span<const Annotation> annotations,
                                   double recording_duration_s) {
  Hypnogram h;
  const auto n = static_cast<std::int64_t>(
      std::floor(recording_duration_s / h.epoch_s + 1e-9));
  h.stages.assign(std::max<std::int64_t>(n, 0), SleepStage::kUnknown);
  // Onset of the annotation that claimed each epoch, for error messages.
  std::vector<double> owner(h.stages.size(), std::nan(""));
  for (const Annotation& a : annotations) {
    const auto stage = stage_from_annotation(a.text);
    if (!stage) continue;
    const double duration = a.duration_s.value_or(h.epoch_s);
    const std::int64_t first = std::max<std::int64_t>(to_epoch(a.onset_s, h.epoch_s), 0);
    const std::int64_t last =
        std::min<std::int64_t>(to_epoch(a.onset_s + duration, h.epoch_s), n);
    for (std::int64_t e = first; e < last; ++e) {
      if (!std::isnan(owner[e]) && h.stages[e] != *stage) {
        std::ostringstream msg;
        msg << "contradictory stage annotations at onsets " << owner[e] << " s ("
            << to_string(h.stages[e]) << ") and " << a.onset_s << " s ("
            << to_string(*stage) << ") overlap at epoch " << e;
        throw Error(msg.str());
      }
      h.stages[e] = *stage;
      owner[e] = a.onset_s;
    }
  }
  return h;
}

Hypnogram parse_hypnogram_csv(std::string_view text) {
  Hypnogram h;
  std::int64_t line_no = 0;
  bool saw_header = false;
  std::int64_t previous = -1;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "epoch_index,stage") {
        throw ParseError("hypnogram CSV must start with 'epoch_index,stage'", line_no,
                         ParseError::Unit::kLine);
      }
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("expected 'epoch_index,stage'", line_no, ParseError::Unit::kLine);
    }
    const std::string_view idx_text = trim(line.substr(0, comma));
    std::int64_t idx = 0;
    auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
    if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || idx <= previous) {
      throw ParseError("bad or non-increasing epoch index '" + std::string(idx_text) + "'",
                       line_no, ParseError::Unit::kLine);
    }
    SleepStage stage;
    try {
      stage = parse_stage(line.substr(comma + 1));
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, ParseError::Unit::kLine);
    }
    h.stages.resize(idx, SleepStage::kUnknown);
    h.stages.push_back(stage);
    previous = idx;
  }
  if (!saw_header) throw ParseError("empty hypnogram CSV", 1, ParseError::Unit::kLine);
  return h;
}

Hypnogram read_hypnogram_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open hypnogram " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_hypnogram_csv(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset(), e.unit());
  }
}

void write_hypnogram_csv(const std::filesystem::path& path, const Hypnogram& h) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write hypnogram " + path.string());
  out << "epoch_index,stage\n";
  for (std::size_t i = 0; i < h.stages.size(); ++i) {
    out << i << ',' << to_string(h.stages[i]) << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

Hypnogram map_rk_to_aasm(const Hypnogram& h) {
  Hypnogram out = h;
  for (SleepStage& s : out.stages) {
    if (s == SleepStage::kN4) s = SleepStage::kN3;
  }
  return out;
}

Hypnogram align_to_grid(const Hypnogram& h, std::int64_t n_epochs) {
  Hypnogram out = h;
  out.stages.resize(static_cast<std::size_t>(n_epochs), SleepStage::kUnknown);
  return out;
}

std::pair<Hypnogram, EpochFeatureMatrix> exclude_invalid(
    const Hypnogram& h, const EpochFeatureMatrix& features) {
  std::vector<bool> keep(static_cast<std::size_t>(features.rows()));
  Hypnogram kept = h;
  kept.stages.clear();
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const std::int64_t e = features.epoch_index.at(r);
    if (e < 0 || e >= h.size()) {
      throw Error("feature row for epoch " + std::to_string(e) +
                  " has no hypnogram entry (" + std::to_string(h.size()) + " epochs)");
    }
    keep[r] = !is_invalid(h.stages[e]);
    if (keep[r]) kept.stages.push_back(h.stages[e]);
  }
  EpochFeatureMatrix m = select_rows(features, keep);
  m.stages = kept.stages;
  return {std::move(kept), std::move(m)};
}

EpochRange trim_wake(const Hypnogram& h, std::int64_t margin_epochs) {
  auto is_sleep = [](SleepStage s) {
    return s == SleepStage::kN1 || s == SleepStage::kN2 || s == SleepStage::kN3 ||
           s == SleepStage::kN4 || s == SleepStage::kRem;
  };
  const auto first = std::find_if(h.stages.begin(), h.stages.end(), is_sleep);
  if (first == h.stages.end()) {
    throw Error("hypnogram of '" + h.recording_id + "' contains no sleep epochs");
  }
  const auto last = std::find_if(h.stages.rbegin(), h.stages.rend(), is_sleep);
  const std::int64_t f = first - h.stages.begin();
  const std::int64_t l = h.size() - 1 - (last - h.stages.rbegin());
  return {std::max<std::int64_t>(0, f - margin_epochs),
          std::min<std::int64_t>(h.size(), l + margin_epochs + 1)};
}

std::string LabelReport::to_json() const {
  nlohmann::ordered_json j;
  j["subject_id"] = subject_id;
  j["recording_id"] = recording_id;
  j["n_epochs"] = n_epochs;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < stage_counts.size(); ++i) {
    counts[std::string(kStageNames[i])] = stage_counts[i];
  }
  j["stage_counts"] = counts;
  j["excluded"] = {{"MOVEMENT", excluded_movement}, {"UNKNOWN", excluded_unknown}};
  j["n_rows"] = n_rows;
  if (trim_range) {
    j["trim_range"] = {trim_range->begin, trim_range->end};
  } else {
    j["trim_range"] = nullptr;
  }
  return j.dump(2);
}

}  // namespace somno

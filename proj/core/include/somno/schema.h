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

#ifndef SOMNO_SCHEMA_H_
#define SOMNO_SCHEMA_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "somno/features.h"
#include "somno/recording.h"

namespace somno {

enum class Placement { kW30, kW60Left, kW60Right, kW90 };

// Window bounds in seconds relative to the start of the current epoch.
struct PlacementSpec {
  Placement placement;
  std::string_view name;
  int start_offset_s;
  int end_offset_s;

  int span_s() const { return end_offset_s - start_offset_s; }
};

inline constexpr std::array<PlacementSpec, 4> kPlacements{{
    {Placement::kW30, "w30", 0, 30},
    {Placement::kW60Left, "w60_left", -30, 30},   // epoch at the end
    {Placement::kW60Right, "w60_right", 0, 60},   // epoch at the start
    {Placement::kW90, "w90", -30, 60},            // centred
}};

// Epoch offsets whose w30 features are copied into each row.
inline constexpr std::array<int, 4> kShifts{-2, -1, 1, 2};
inline constexpr int kEpochSeconds = 30;
// Columns per (channel, feature): four placements plus four shifts.
inline constexpr std::size_t kSlotsPerFeature = kPlacements.size() + kShifts.size();

std::string_view to_string(Placement p);

struct ChannelSlot {
  std::string name;
  ChannelKind kind;

  friend bool operator==(const ChannelSlot&, const ChannelSlot&) = default;
};

struct ColumnDescriptor {
  std::string channel;
  ChannelKind kind;
  FeatureId feature;
  Placement placement;
  int shift;  // nonzero only for kW30

  // "{channel}__{feature}__{placement}__s{shift}"
  std::string name() const;
};

// Column layout of an epoch feature matrix. Columns are grouped by channel
// (montage order), then feature (catalog order); each (channel, feature)
// owns kSlotsPerFeature consecutive columns: w30, w60_left, w60_right, w90,
// then the w30 value shifted by -2, -1, +1, +2 epochs.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<ChannelSlot> channels);

  // EEG1, EEG2, EOG, EMG.
  static FeatureSchema standard();

  const std::vector<ChannelSlot>& channels() const { return channels_; }
  const std::vector<ColumnDescriptor>& columns() const { return columns_; }
  std::size_t size() const { return columns_.size(); }
  std::vector<std::string> column_names() const;

  // Features per window across all channels.
  std::size_t features_per_window() const;
  std::size_t catalog_size(std::size_t channel) const;
  std::size_t channel_offset(std::size_t channel) const { return offsets_[channel]; }

  // slot: 0..3 = placements, 4..7 = shifts in kShifts order.
  std::size_t column(std::size_t channel, std::size_t feature,
                     std::size_t slot) const {
    return offsets_[channel] + feature * kSlotsPerFeature + slot;
  }

  // SHA-256 over the ordered column names and channel kinds.
  const std::string& hash() const { return hash_; }

  friend bool operator==(const FeatureSchema& a, const FeatureSchema& b) {
    return a.hash_ == b.hash_;
  }

 private:
  std::vector<ChannelSlot> channels_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> catalog_sizes_;
  std::vector<ColumnDescriptor> columns_;
  std::string hash_;
};

}  // namespace somno

#endif  // SOMNO_SCHEMA_H_

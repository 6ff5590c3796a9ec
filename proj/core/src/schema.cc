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

#include "somno/schema.h"

#include "somno/digest.h"
#include "somno/error.h"

namespace somno {

std::string_view to_string(Placement p) {
  return kPlacements[static_cast<std::size_t>(p)].name;
}

std::string ColumnDescriptor::name() const {
  return channel + "__" + feature.name() + "__" + std::string(to_string(placement)) +
         "__s" + std::to_string(shift);
}

FeatureSchema::FeatureSchema(std::vector<ChannelSlot> channels)
    : channels_(std::move(channels)) {
  if (channels_.empty()) throw Error("feature schema needs at least one channel");
  std::string canonical;
  for (const ChannelSlot& ch : channels_) {
    for (const ChannelSlot& other : channels_) {
      if (&ch != &other && ch.name == other.name) {
        throw Error("duplicate channel name '" + ch.name + "' in feature schema");
      }
    }
    offsets_.push_back(columns_.size());
    const auto catalog = feature_catalog(ch.kind);
    catalog_sizes_.push_back(catalog.size());
    for (const FeatureId& f : catalog) {
      for (const PlacementSpec& p : kPlacements) {
        columns_.push_back({ch.name, ch.kind, f, p.placement, 0});
      }
      for (int s : kShifts) {
        columns_.push_back({ch.name, ch.kind, f, Placement::kW30, s});
      }
    }
  }
  for (const ColumnDescriptor& c : columns_) {
    canonical += std::string(to_string(c.kind)) + ":" + c.name() + "\n";
  }
  hash_ = sha256_hex(canonical);
}

FeatureSchema FeatureSchema::standard() {
  return FeatureSchema({{"EEG1", ChannelKind::kEeg},
                        {"EEG2", ChannelKind::kEeg},
                        {"EOG", ChannelKind::kEog},
                        {"EMG", ChannelKind::kEmg}});
}

std::vector<std::string> FeatureSchema::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& c : columns_) names.push_back(c.name());
  return names;
}

std::size_t FeatureSchema::features_per_window() const {
  std::size_t total = 0;
  for (std::size_t n : catalog_sizes_) total += n;
  return total;
}

std::size_t FeatureSchema::catalog_size(std::size_t channel) const {
  return catalog_sizes_.at(channel);
}

}  // namespace somno

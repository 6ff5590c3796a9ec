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

#include "somno/windowing.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "somno/error.h"
#include "somno/parallel.h"

namespace somno {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t whole_epochs(const Channel& ch, int epoch_s) {
  // floor(n / (rate * epoch_s)) without going through floating point.
  const Rational samples_per_epoch = ch.sampling_rate * Rational(epoch_s);
  const Rational epochs = Rational(static_cast<std::int64_t>(ch.samples.size())) /
                          samples_per_epoch;
  return epochs.floor_times(1);
}

}  // namespace

EpochGrid segment_epochs(const Recording& recording, int epoch_s) {
  if (epoch_s <= 0) throw Error("epoch length must be positive");
  if (recording.channels.empty()) throw Error("recording has no channels");
  std::int64_t n = std::numeric_limits<std::int64_t>::max();
  for (const Channel& ch : recording.channels) {
    n = std::min(n, whole_epochs(ch, epoch_s));
  }
  if (n < 1) {
    throw Error("recording '" + recording.recording_id +
                "' is shorter than one epoch");
  }
  return {epoch_s, n};
}

void boundary_fill(RowMatrix& values) {
  const Eigen::Index rows = values.rows();
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    bool any_missing = false;
    for (Eigen::Index r = 0; r < rows && !any_missing; ++r) {
      any_missing = !std::isfinite(values(r, c));
    }
    if (!any_missing) continue;
    std::vector<Eigen::Index> finite;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (std::isfinite(values(r, c))) finite.push_back(r);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (std::isfinite(values(r, c))) continue;
      if (finite.empty()) {
        values(r, c) = 0.0;
        continue;
      }
      auto it = std::lower_bound(finite.begin(), finite.end(), r);
      Eigen::Index pick;
      if (it == finite.end()) {
        pick = finite.back();
      } else if (it == finite.begin()) {
        pick = *it;
      } else {
        const Eigen::Index after = *it;
        const Eigen::Index before = *(it - 1);
        pick = (r - before <= after - r) ? before : after;
      }
      values(r, c) = values(pick, c);
    }
  }
}

EpochFeatureMatrix extract_features(const Recording& recording,
                                    const FeatureSchema& schema,
                                    const ExtractOptions& options) {
  const EpochGrid grid = segment_epochs(recording);
  const std::int64_t n = grid.n_epochs;
  EpochRange range = options.range.value_or(EpochRange{0, n});
  if (range.begin < 0 || range.end > n || range.begin >= range.end) {
    throw Error("epoch range [" + std::to_string(range.begin) + ", " +
                std::to_string(range.end) + ") is outside the " +
                std::to_string(n) + "-epoch grid");
  }
  const auto& channels = schema.channels();
  std::vector<const Channel*> sources;
  for (const ChannelSlot& slot : channels) {
    sources.push_back(&recording.channel(slot.name));
  }

  // w30 features for the range plus the shift margin on both sides.
  const int max_shift = *std::max_element(kShifts.begin(), kShifts.end());
  const std::int64_t ext_begin = std::max<std::int64_t>(0, range.begin - max_shift);
  const std::int64_t ext_end = std::min<std::int64_t>(n, range.end + max_shift);
  const std::size_t per_window = schema.features_per_window();
  std::vector<std::size_t> channel_feature_offset;
  {
    std::size_t acc = 0;
    for (std::size_t c = 0; c < channels.size(); ++c) {
      channel_feature_offset.push_back(acc);
      acc += schema.catalog_size(c);
    }
  }

  // Row r of `w30` holds epoch ext_begin + r.
  RowMatrix w30(ext_end - ext_begin, per_window);
  const std::int64_t rows = range.size();
  EpochFeatureMatrix out;
  out.subject_id = recording.subject_id;
  out.recording_id = recording.recording_id;
  out.schema = schema;
  out.values.resize(rows, static_cast<Eigen::Index>(schema.size()));
  out.epoch_index.resize(rows);
  for (std::int64_t r = 0; r < rows; ++r) out.epoch_index[r] = range.begin + r;

  const std::int64_t grid_end_s = n * grid.epoch_s;
  // Evaluates placement p of epoch e on channel c into dst, or NaN-fills it.
  auto evaluate = [&](std::size_t c, std::int64_t e, const PlacementSpec& p,
                      std::span<double> dst) {
    const Channel& ch = *sources[c];
    const std::int64_t start_s = e * grid.epoch_s + p.start_offset_s;
    const std::int64_t end_s = e * grid.epoch_s + p.end_offset_s;
    const std::int64_t lo = std::max<std::int64_t>(start_s, 0);
    const std::int64_t hi = std::min<std::int64_t>(end_s, grid_end_s);
    if (2 * (hi - lo) < p.span_s()) {
      std::fill(dst.begin(), dst.end(), kNaN);
      return;
    }
    const std::int64_t a = ch.sampling_rate.floor_times(lo);
    const std::int64_t b = ch.sampling_rate.floor_times(hi);
    std::span<const double> window(ch.samples.data() + a,
                                   static_cast<std::size_t>(b - a));
    compute_window_features(window, ch.rate_hz(), channels[c].kind,
                            options.params, dst);
  };

  parallel_for(static_cast<std::size_t>(ext_end - ext_begin), options.workers,
               [&](std::size_t r) {
                 const std::int64_t e = ext_begin + static_cast<std::int64_t>(r);
                 for (std::size_t c = 0; c < channels.size(); ++c) {
                   std::span<double> dst(w30.row(r).data() + channel_feature_offset[c],
                                         schema.catalog_size(c));
                   evaluate(c, e, kPlacements[0], dst);
                 }
               });

  parallel_for(static_cast<std::size_t>(rows), options.workers, [&](std::size_t r) {
    const std::int64_t e = range.begin + static_cast<std::int64_t>(r);
    std::vector<double> buf;
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const std::size_t nf = schema.catalog_size(c);
      buf.resize(nf);
      auto put = [&](std::size_t slot, std::span<const double> v) {
        for (std::size_t f = 0; f < nf; ++f) {
          out.values(static_cast<Eigen::Index>(r),
                     static_cast<Eigen::Index>(schema.column(c, f, slot))) = v[f];
        }
      };
      auto w30_of = [&](std::int64_t epoch) {
        return std::span<const double>(
            w30.row(epoch - ext_begin).data() + channel_feature_offset[c], nf);
      };
      put(0, w30_of(e));
      for (std::size_t p = 1; p < kPlacements.size(); ++p) {
        evaluate(c, e, kPlacements[p], buf);
        put(p, buf);
      }
      for (std::size_t s = 0; s < kShifts.size(); ++s) {
        const std::int64_t src = std::clamp<std::int64_t>(e + kShifts[s], 0, n - 1);
        put(kPlacements.size() + s, w30_of(src));
      }
    }
  });

  boundary_fill(out.values);
  return out;
}

EpochFeatureMatrix select_rows(const EpochFeatureMatrix& m,
                               const std::vector<bool>& keep) {
  if (keep.size() != static_cast<std::size_t>(m.rows())) {
    throw Error("row mask has " + std::to_string(keep.size()) +
                " entries for a matrix with " + std::to_string(m.rows()) + " rows");
  }
  EpochFeatureMatrix out;
  out.subject_id = m.subject_id;
  out.recording_id = m.recording_id;
  out.schema = m.schema;
  out.provenance = m.provenance;
  const auto kept = std::count(keep.begin(), keep.end(), true);
  out.values.resize(kept, m.values.cols());
  Eigen::Index w = 0;
  for (std::size_t r = 0; r < keep.size(); ++r) {
    if (!keep[r]) continue;
    out.values.row(w++) = m.values.row(static_cast<Eigen::Index>(r));
    out.epoch_index.push_back(m.epoch_index[r]);
    if (!m.stages.empty()) out.stages.push_back(m.stages[r]);
  }
  return out;
}

}  // namespace somno

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

#include "somno/matrix_io.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "somno/error.h"

namespace somno {
namespace {

static_assert(std::endian::native == std::endian::little,
              "matrix container assumes a little-endian host");

constexpr int kFormatVersion = 1;

nlohmann::ordered_json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

EpochFeatureMatrix header_from_json(const nlohmann::ordered_json& j,
                                    const std::filesystem::path& path) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw Error("unsupported matrix format version");
    }
    EpochFeatureMatrix m;
    m.subject_id = j.at("subject_id").get<std::string>();
    m.recording_id = j.at("recording_id").get<std::string>();
    std::vector<ChannelSlot> channels;
    for (const auto& c : j.at("channels")) {
      channels.push_back({c.at("name").get<std::string>(),
                          parse_channel_kind(c.at("kind").get<std::string>())});
    }
    m.schema = FeatureSchema(std::move(channels));
    if (m.schema.hash() != j.at("schema_hash").get<std::string>()) {
      throw Error("schema hash does not match this build's feature catalog");
    }
    if (m.schema.column_names() != j.at("columns").get<std::vector<std::string>>()) {
      throw Error("column names do not match this build's feature catalog");
    }
    m.epoch_index = j.at("epoch_index").get<std::vector<std::int64_t>>();
    for (const auto& s : j.at("stages")) m.stages.push_back(parse_stage(s.get<std::string>()));
    for (const auto& [k, v] : j.at("provenance").items()) {
      m.provenance[k] = v.get<std::string>();
    }
    const auto rows = j.at("rows").get<std::int64_t>();
    if (rows != static_cast<std::int64_t>(m.epoch_index.size()) ||
        (!m.stages.empty() && m.stages.size() != m.epoch_index.size())) {
      throw Error("row count disagrees with epoch index / stage lists");
    }
    if (j.at("cols").get<std::size_t>() != m.schema.size()) {
      throw Error("column count disagrees with schema");
    }
    m.values.resize(rows, static_cast<Eigen::Index>(m.schema.size()));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": malformed sidecar: " + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& f64_path) {
  auto p = f64_path;
  p.replace_extension(".json");
  return p;
}

void write_matrix_binary(const std::filesystem::path& f64_path,
                         const EpochFeatureMatrix& m) {
  if (m.values.cols() != static_cast<Eigen::Index>(m.schema.size())) {
    throw Error("matrix has " + std::to_string(m.values.cols()) +
                " columns but its schema has " + std::to_string(m.schema.size()));
  }
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["subject_id"] = m.subject_id;
  j["recording_id"] = m.recording_id;
  j["rows"] = m.rows();
  j["cols"] = m.values.cols();
  j["schema_hash"] = m.schema.hash();
  auto channels = nlohmann::ordered_json::array();
  for (const auto& c : m.schema.channels()) {
    channels.push_back({{"name", c.name}, {"kind", std::string(to_string(c.kind))}});
  }
  j["channels"] = channels;
  j["columns"] = m.schema.column_names();
  j["epoch_index"] = m.epoch_index;
  auto stages = nlohmann::ordered_json::array();
  for (SleepStage s : m.stages) stages.push_back(std::string(to_string(s)));
  j["stages"] = stages;
  j["provenance"] = m.provenance;

  // Write values first and the sidecar last: a present sidecar marks a
  // complete pair.
  auto tmp = f64_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(m.values.data()),
              static_cast<std::streamsize>(m.values.size() * sizeof(double)));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, f64_path);
  const auto side = sidecar_path(f64_path);
  auto side_tmp = side;
  side_tmp += ".tmp";
  {
    std::ofstream out(side_tmp, std::ios::trunc);
    if (!out) throw Error("cannot write " + side_tmp.string());
    out << j.dump(1) << '\n';
    if (!out) throw Error("failed writing " + side_tmp.string());
  }
  std::filesystem::rename(side_tmp, side);
}

EpochFeatureMatrix read_matrix_header(const std::filesystem::path& f64_path) {
  const auto side = sidecar_path(f64_path);
  return header_from_json(load_json(side), side);
}

EpochFeatureMatrix read_matrix_binary(const std::filesystem::path& f64_path) {
  EpochFeatureMatrix m = read_matrix_header(f64_path);
  const auto expected = static_cast<std::uintmax_t>(m.values.size()) * sizeof(double);
  std::error_code ec;
  const auto actual = std::filesystem::file_size(f64_path, ec);
  if (ec) throw Error("cannot stat " + f64_path.string() + ": " + ec.message());
  if (actual != expected) {
    throw Error(f64_path.string() + ": expected " + std::to_string(expected) +
                " bytes, found " + std::to_string(actual));
  }
  std::ifstream in(f64_path, std::ios::binary);
  if (!in) throw Error("cannot open " + f64_path.string());
  in.read(reinterpret_cast<char*>(m.values.data()), static_cast<std::streamsize>(expected));
  if (!in) throw Error("short read from " + f64_path.string());
  return m;
}

void write_matrix_csv(const std::filesystem::path& path, const EpochFeatureMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << "subject_id,recording_id,epoch_index,stage";
  for (const auto& name : m.schema.column_names()) out << ',' << name;
  out << '\n';
  char buf[32];
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    out << m.subject_id << ',' << m.recording_id << ',' << m.epoch_index[r] << ','
        << (m.stages.empty() ? std::string_view("UNKNOWN") : to_string(m.stages[r]));
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m.values(r, c));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace somno

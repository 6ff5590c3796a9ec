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

#include "config.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>

#include "somno/digest.h"
#include "somno/error.h"
#include "somno/parallel.h"

namespace somno::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

BandpassSpec read_band(const json& j) {
  BandpassSpec b;
  b.low_hz = j.at("low_hz").get<double>();
  b.high_hz = j.at("high_hz").get<double>();
  b.order = j.at("order").get<int>();
  if (!(b.low_hz > 0 && b.high_hz > b.low_hz) || b.order < 1) {
    throw UsageError("invalid band-pass specification " + j.dump());
  }
  return b;
}

DerivationRule read_rule(const json& o) {
  const int forms = o.contains("pick") + o.contains("difference") + o.contains("average");
  if (forms != 1) {
    throw UsageError("montage output needs exactly one of pick/difference/average: " + o.dump());
  }
  if (o.contains("pick")) return Pick{o.at("pick").get<std::string>()};
  if (o.contains("difference")) {
    const auto v = o.at("difference").get<std::vector<std::string>>();
    if (v.size() != 2) throw UsageError("difference takes two labels");
    return Difference{v[0], v[1]};
  }
  const auto v = o.at("average").get<std::vector<std::string>>();
  if (v.empty()) throw UsageError("average needs at least one label");
  return Average{v};
}

Montage read_montage(const json& j, std::string& name) {
  if (j.is_string()) {
    name = j.get<std::string>();
    if (name == "sleep-edf") return Montage::sleep_edf();
    if (name == "mass-ss3") return Montage::mass_ss3();
    throw UsageError("unknown montage preset '" + name + "' (sleep-edf, mass-ss3)");
  }
  name = "custom";
  Montage m;
  for (const auto& o : j.at("outputs")) {
    m.outputs.push_back({o.at("name").get<std::string>(),
                         parse_channel_kind(o.at("kind").get<std::string>()),
                         read_rule(o)});
  }
  if (m.outputs.empty()) throw UsageError("montage has no outputs");
  return m;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

// Sleep-EDF style discovery: PSG files and hypnogram files share a key
// (capture group 1 of each regex); group 2 of the PSG regex, when present,
// is the subject id.
std::vector<RecordingSource> discover(const json& d, const fs::path& base) {
  const fs::path dir = resolve(base, d.at("directory").get<std::string>());
  const std::regex psg_re(d.at("psg_regex").get<std::string>());
  const std::regex hyp_re(d.at("hypnogram_regex").get<std::string>());
  if (!fs::is_directory(dir)) throw UsageError("discovery directory " + dir.string() + " not found");
  std::map<std::string, std::pair<fs::path, std::string>> psg;
  std::map<std::string, fs::path> hyp;
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) entries.push_back(e.path());
  }
  std::sort(entries.begin(), entries.end());
  for (const auto& p : entries) {
    const std::string name = p.filename().string();
    std::smatch m;
    if (std::regex_match(name, m, psg_re) && m.size() >= 2) {
      psg[m[1].str()] = {p, m.size() >= 3 ? m[2].str() : m[1].str()};
    } else if (std::regex_match(name, m, hyp_re) && m.size() >= 2) {
      if (hyp.contains(m[1].str())) {
        throw UsageError("two hypnograms match key '" + m[1].str() + "' in " + dir.string());
      }
      hyp[m[1].str()] = p;
    }
  }
  std::vector<RecordingSource> out;
  for (const auto& [key, value] : psg) {
    auto it = hyp.find(key);
    if (it == hyp.end()) throw UsageError("no hypnogram for recording '" + key + "'");
    out.push_back({value.first, it->second, value.second, key});
  }
  if (out.empty()) throw UsageError("discovery found no recordings in " + dir.string());
  return out;
}

void apply_override(json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("override must look like key.path=value: '" + assignment + "'");
  }
  std::string pointer;
  std::string key = assignment.substr(0, eq);
  std::size_t start = 0;
  while (start <= key.size()) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw UsageError("empty key component in '" + key + "'");
    pointer += "/" + part;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  const json::json_pointer ptr(pointer);
  if (!cfg.contains(ptr)) throw UsageError("unknown config key '" + key + "'");
  if (cfg.at(ptr).is_object() || cfg.at(ptr).is_array()) {
    if (!value.is_object() && !value.is_array()) {
      throw UsageError("config key '" + key + "' is not a scalar");
    }
  }
  cfg[ptr] = value;
}

// Rejects keys that the defaults do not know, to catch typos.
void check_known(const json& defaults, const json& given, const std::string& where) {
  if (!given.is_object() || !defaults.is_object()) return;
  for (const auto& [k, v] : given.items()) {
    if (!defaults.contains(k)) {
      throw UsageError("unknown config key '" + where + k + "'");
    }
    // Free-form subtrees.
    if (k == "montage" || k == "recordings" || k == "discover") continue;
    check_known(defaults.at(k), v, where + k + ".");
  }
}

}  // namespace

json default_config() {
  return json::parse(R"({
    "dataset": {
      "name": "dataset",
      "recordings": [],
      "discover": null,
      "montage": "sleep-edf",
      "trim_wake": false
    },
    "preprocessing": {
      "eeg": {"low_hz": 0.4, "high_hz": 30.0, "order": 4},
      "eog": {"low_hz": 0.4, "high_hz": 30.0, "order": 4},
      "emg": {"low_hz": 0.5, "high_hz": 10.0, "order": 4},
      "target_rate_hz": 100
    },
    "features": {
      "higuchi_kmax": 10,
      "permutation_order": 3,
      "permutation_delay": 1,
      "welch_segment_s": 5.0,
      "write_csv": false
    },
    "model": {
      "l2_strength": 1.0,
      "n_quantiles": 100,
      "max_iterations": 1000,
      "tolerance": 1e-4
    },
    "eval": {
      "protocol": "LFS",
      "k": 0,
      "train_features_dir": null,
      "exclude_subjects": [],
      "allow_overlap": false
    },
    "output_dir": "out",
    "parallelism": 1,
    "seed": 0
  })");
}

std::string RunConfig::extraction_settings_digest() const {
  json j;
  j["montage"] = effective.at("dataset").at("montage");
  j["trim_wake"] = trim_wake;
  j["preprocessing"] = effective.at("preprocessing");
  json f = effective.at("features");
  f.erase("write_csv");
  j["features"] = f;
  return sha256_hex(j.dump());
}

RunConfig load_config(const fs::path& path, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  json user;
  {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config " + path.string());
    try {
      user = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError("config " + path.string() + " is not valid JSON: " + e.what());
    }
  }
  if (!user.is_object()) throw UsageError("config must be a JSON object");
  json defaults = default_config();
  check_known(defaults, user, "");
  json eff = defaults;
  eff.merge_patch(user);
  // merge_patch drops keys set to null; restore them so lookups stay uniform.
  for (const char* key : {"discover"}) {
    if (!eff["dataset"].contains(key)) eff["dataset"][key] = nullptr;
  }
  if (!eff["eval"].contains("train_features_dir")) eff["eval"]["train_features_dir"] = nullptr;
  for (const auto& o : overrides) apply_override(eff, o);
  cfg.effective = eff;
  cfg.config_digest = sha256_hex(eff.dump());
  cfg.base_dir = fs::absolute(path).parent_path();

  try {
    const json& ds = eff.at("dataset");
    cfg.dataset_name = ds.at("name").get<std::string>();
    for (const auto& r : ds.at("recordings")) {
      RecordingSource src;
      src.psg = resolve(cfg.base_dir, r.at("psg").get<std::string>());
      src.hypnogram = resolve(cfg.base_dir, r.at("hypnogram").get<std::string>());
      src.recording_id = r.contains("recording_id") ? r.at("recording_id").get<std::string>()
                                                    : src.psg.stem().string();
      src.subject_id = r.contains("subject_id") ? r.at("subject_id").get<std::string>()
                                                : src.recording_id;
      cfg.recordings.push_back(std::move(src));
    }
    if (!ds.at("discover").is_null()) {
      auto found = discover(ds.at("discover"), cfg.base_dir);
      cfg.recordings.insert(cfg.recordings.end(), found.begin(), found.end());
    }
    std::set<std::string> ids;
    for (const auto& r : cfg.recordings) {
      if (r.recording_id.empty() || r.subject_id.empty()) {
        throw UsageError("recording and subject ids must be non-empty");
      }
      if (r.recording_id.find_first_of("/\\") != std::string::npos) {
        throw UsageError("recording id '" + r.recording_id + "' contains a path separator");
      }
      if (!ids.insert(r.recording_id).second) {
        throw UsageError("duplicate recording id '" + r.recording_id + "'");
      }
    }
    cfg.montage = read_montage(ds.at("montage"), cfg.montage_name);
    cfg.trim_wake = ds.at("trim_wake").get<bool>();

    const json& pp = eff.at("preprocessing");
    cfg.preprocess.eeg = read_band(pp.at("eeg"));
    cfg.preprocess.eog = read_band(pp.at("eog"));
    cfg.preprocess.emg = read_band(pp.at("emg"));
    const double rate = pp.at("target_rate_hz").get<double>();
    cfg.preprocess.target_rate_hz = Rational::approximate(rate, 1000);
    if (!(rate > 0) || std::abs(cfg.preprocess.target_rate_hz.to_double() - rate) > 1e-9 * rate) {
      throw UsageError("target_rate_hz must be a positive rational with denominator <= 1000");
    }

    const json& ft = eff.at("features");
    cfg.features.higuchi_kmax = ft.at("higuchi_kmax").get<int>();
    cfg.features.permutation_order = ft.at("permutation_order").get<int>();
    cfg.features.permutation_delay = ft.at("permutation_delay").get<int>();
    cfg.features.welch_segment_s = ft.at("welch_segment_s").get<double>();
    cfg.write_csv = ft.at("write_csv").get<bool>();
    if (cfg.features.higuchi_kmax < 2 || cfg.features.permutation_order < 2 ||
        cfg.features.permutation_delay < 1 || !(cfg.features.welch_segment_s > 0)) {
      throw UsageError("invalid feature parameters " + ft.dump());
    }

    const json& md = eff.at("model");
    cfg.model.logistic.l2 = md.at("l2_strength").get<double>();
    cfg.model.n_quantiles = md.at("n_quantiles").get<int>();
    cfg.model.logistic.max_iterations = md.at("max_iterations").get<int>();
    cfg.model.logistic.tolerance = md.at("tolerance").get<double>();
    if (cfg.model.logistic.l2 < 0 || cfg.model.n_quantiles < 1 ||
        cfg.model.logistic.max_iterations < 1 || !(cfg.model.logistic.tolerance > 0)) {
      throw UsageError("invalid model parameters " + md.dump());
    }

    const json& ev = eff.at("eval");
    cfg.protocol = ev.at("protocol").get<std::string>();
    if (cfg.protocol != "LFS" && cfg.protocol != "DT") {
      throw UsageError("eval.protocol must be LFS or DT");
    }
    cfg.k = ev.at("k").get<int>();
    if (cfg.k < 0) throw UsageError("eval.k must be non-negative");
    if (!ev.at("train_features_dir").is_null()) {
      cfg.train_features_dir = resolve(cfg.base_dir, ev.at("train_features_dir").get<std::string>());
    }
    cfg.exclude_subjects = ev.at("exclude_subjects").get<std::vector<std::string>>();
    cfg.allow_overlap = ev.at("allow_overlap").get<bool>();

    cfg.output_dir = resolve(cfg.base_dir, eff.at("output_dir").get<std::string>());
    cfg.parallelism = eff.at("parallelism").get<int>();
    if (cfg.parallelism < 0) throw UsageError("parallelism must be non-negative");
    if (cfg.parallelism == 0) cfg.parallelism = somno::hardware_workers();
    cfg.seed = eff.at("seed").get<std::uint64_t>();
    cfg.model.logistic.workers = cfg.parallelism;
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  } catch (const somno::Error& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

}  // namespace somno::cli

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

#include "commands.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>

#include "log.h"
#include "somno/cv.h"
#include "somno/digest.h"
#include "somno/edf.h"
#include "somno/error.h"
#include "somno/labels.h"
#include "somno/matrix_io.h"
#include "somno/parallel.h"
#include "somno/pca.h"
#include "somno/schema.h"
#include "somno/windowing.h"

namespace somno::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr char kToolVersion[] = "somno 0.1.0";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

FeatureSchema schema_for(const Montage& montage) {
  std::vector<ChannelSlot> slots;
  for (const auto& o : montage.outputs) slots.push_back({o.name, o.kind});
  return FeatureSchema(std::move(slots));
}

json signal_json(const SignalSpec& s, const EdfHeader& h, std::size_t i) {
  json j;
  j["label"] = s.label;
  j["transducer"] = s.transducer;
  j["physical_dimension"] = s.physical_dimension;
  j["physical_min"] = s.physical_min;
  j["physical_max"] = s.physical_max;
  j["digital_min"] = s.digital_min;
  j["digital_max"] = s.digital_max;
  j["prefiltering"] = s.prefiltering;
  j["samples_per_record"] = s.samples_per_record;
  j["sampling_rate_hz"] = h.record_duration_s.is_zero() ? 0.0 : h.sampling_rate(i).to_double();
  j["sampling_rate"] = h.record_duration_s.is_zero() ? "0" : h.sampling_rate(i).to_string();
  j["is_annotation"] = s.is_annotation();
  return j;
}

json metrics_json(const MetricsReport& r) {
  json j;
  if (r.fold_id) j["fold_id"] = *r.fold_id;
  j["n_epochs"] = r.n_epochs;
  j["mf1"] = r.mf1;
  j["acc"] = r.acc;
  j["kappa"] = r.kappa;
  j["log_loss"] = r.log_loss ? json(*r.log_loss) : json(nullptr);
  json f1 = json::object();
  for (int k = 0; k < kNumClasses; ++k) f1[std::string(to_string(kModelClasses[k]))] = r.per_class_f1[k];
  j["per_class_f1"] = f1;
  json cm = json::array();
  for (const auto& row : r.confusion.counts) cm.push_back(row);
  j["confusion"] = cm;
  return j;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "truth\\pred";
  for (SleepStage s : kModelClasses) out += "," + std::string(to_string(s));
  out += "\n";
  for (int i = 0; i < kNumClasses; ++i) {
    out += std::string(to_string(kModelClasses[i]));
    for (int j = 0; j < kNumClasses; ++j) out += "," + std::to_string(cm.counts[i][j]);
    out += "\n";
  }
  return out;
}

// ---- extraction ------------------------------------------------------------

enum class Outcome { kExtracted, kSkipped };

Hypnogram load_hypnogram(const fs::path& path, std::int64_t n_epochs) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  if (ext == ".csv") return align_to_grid(read_hypnogram_csv(path), n_epochs);
  const auto ann = parse_edfplus_annotations(path);
  return annotations_to_hypnogram(ann, static_cast<double>(n_epochs) * kEpochSeconds);
}

Outcome extract_one(const RunConfig& cfg, const RecordingSource& src, bool force,
                    int inner_workers) {
  Stopwatch total;
  Stopwatch lap;
  const std::string digest = sha256_hex(
      std::string(kToolVersion) + "|" + cfg.extraction_settings_digest() + "|" +
      sha256_file(src.psg) + "|" + sha256_file(src.hypnogram) + "|" + src.subject_id + "|" +
      src.recording_id);
  const fs::path out_path = cfg.features_path(src.recording_id);
  if (!force && fs::exists(sidecar_path(out_path)) && fs::exists(out_path)) {
    try {
      const auto existing = read_matrix_header(out_path);
      auto it = existing.provenance.find("extraction_digest");
      if (it != existing.provenance.end() && it->second == digest) {
        log_event("info", "extract.skip",
                  {{"recording", src.recording_id}, {"reason", "output digest current"}});
        return Outcome::kSkipped;
      }
    } catch (const Error&) {
      // Unreadable sidecar: recompute.
    }
  }
  const double t_digest = lap.lap();

  const EdfHeader header = read_edf_header(src.psg);
  const auto labels = cfg.montage.input_labels();
  Recording raw = read_edf_signals(src.psg, header, labels);
  raw.subject_id = src.subject_id;
  raw.recording_id = src.recording_id;
  const double t_read = lap.lap();

  const Recording montaged = derive_channels(raw, cfg.montage);
  std::vector<ChannelPreprocessNote> notes;
  const Recording pre = preprocess(montaged, cfg.preprocess, &notes);
  const double t_pre = lap.lap();

  const EpochGrid grid = segment_epochs(pre);
  const Hypnogram h = map_rk_to_aasm(load_hypnogram(src.hypnogram, grid.n_epochs));
  EpochRange range{0, grid.n_epochs};
  if (cfg.trim_wake) range = trim_wake(h);
  const double t_labels = lap.lap();

  ExtractOptions opts;
  opts.params = cfg.features;
  opts.range = range;
  opts.workers = inner_workers;
  EpochFeatureMatrix features = extract_features(pre, schema_for(cfg.montage), opts);
  const double t_extract = lap.lap();

  auto [kept_h, m] = exclude_invalid(h, features);
  LabelReport report;
  report.subject_id = src.subject_id;
  report.recording_id = src.recording_id;
  report.n_epochs = grid.n_epochs;
  for (std::int64_t e = range.begin; e < range.end; ++e) {
    ++report.stage_counts[static_cast<std::size_t>(h.stages[e])];
    if (h.stages[e] == SleepStage::kMovement) ++report.excluded_movement;
    if (h.stages[e] == SleepStage::kUnknown) ++report.excluded_unknown;
  }
  report.n_rows = m.rows();
  if (cfg.trim_wake) report.trim_range = range;
  if (m.rows() == 0) {
    log_event("warning", "extract.all_invalid", {{"recording", src.recording_id}});
  }
  m.subject_id = src.subject_id;
  m.recording_id = src.recording_id;
  m.provenance["config_digest"] = cfg.config_digest;
  m.provenance["extraction_digest"] = digest;
  m.provenance["extraction_settings_digest"] = cfg.extraction_settings_digest();
  m.provenance["psg"] = src.psg.string();
  m.provenance["hypnogram"] = src.hypnogram.string();
  m.provenance["tool"] = kToolVersion;

  fs::create_directories(cfg.features_dir());
  fs::create_directories(cfg.labels_dir());
  write_matrix_binary(out_path, m);
  json label_json = json::parse(report.to_json());
  label_json["config_digest"] = cfg.config_digest;
  label_json["schema_hash"] = m.schema.hash();
  json pre_notes = json::array();
  for (const auto& n : notes) {
    pre_notes.push_back({{"channel", n.channel},
                         {"filtered", n.filtered},
                         {"resampled", n.resampled},
                         {"rate_in", n.rate_in.to_string()},
                         {"rate_out", n.rate_out.to_string()},
                         {"note", n.note}});
  }
  label_json["preprocessing"] = pre_notes;
  write_text(cfg.labels_dir() / (src.recording_id + ".json"), label_json.dump(2) + "\n");
  if (cfg.write_csv) {
    write_matrix_csv(cfg.features_dir() / (src.recording_id + ".csv"), m);
  }
  const double t_write = lap.lap();
  log_event("info", "extract.done",
            {{"recording", src.recording_id},
             {"subject", src.subject_id},
             {"epochs", grid.n_epochs},
             {"rows", m.rows()},
             {"wall_s",
              {{"digest", t_digest},
               {"read", t_read},
               {"preprocess", t_pre},
               {"labels", t_labels},
               {"extract", t_extract},
               {"write", t_write},
               {"total", total.seconds()}}}});
  return Outcome::kExtracted;
}

// ---- loading extracted matrices --------------------------------------------

struct LoadedSet {
  std::vector<EpochFeatureMatrix> matrices;
  std::string schema_hash;
  std::string settings_digest;
};

void check_compatible(LoadedSet& set, const EpochFeatureMatrix& m, const fs::path& path) {
  const auto it = m.provenance.find("extraction_settings_digest");
  const std::string settings = it == m.provenance.end() ? "" : it->second;
  if (set.matrices.empty()) {
    set.schema_hash = m.schema.hash();
    set.settings_digest = settings;
    return;
  }
  if (m.schema.hash() != set.schema_hash) {
    throw Error(path.string() + " uses feature schema " + m.schema.hash().substr(0, 12) +
                ", expected " + set.schema_hash.substr(0, 12));
  }
  if (settings != set.settings_digest) {
    throw Error(path.string() + " was extracted with different settings (digest " +
                settings.substr(0, 12) + " vs " + set.settings_digest.substr(0, 12) + ")");
  }
}

LoadedSet load_dataset(const RunConfig& cfg) {
  if (cfg.recordings.empty()) throw UsageError("dataset lists no recordings");
  LoadedSet set;
  for (const auto& src : cfg.recordings) {
    const fs::path p = cfg.features_path(src.recording_id);
    if (!fs::exists(p)) {
      throw Error("missing features for '" + src.recording_id + "' (" + p.string() +
                  "); run `somno extract` first");
    }
    EpochFeatureMatrix m = read_matrix_binary(p);
    check_compatible(set, m, p);
    set.matrices.push_back(std::move(m));
  }
  const std::string current = cfg.extraction_settings_digest();
  if (set.settings_digest != current) {
    throw Error("extracted features do not match the current config's extraction settings; "
                "re-run `somno extract`");
  }
  return set;
}

LoadedSet load_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("feature directory " + dir.string() + " not found");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".f64") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no feature files in " + dir.string());
  LoadedSet set;
  for (const auto& p : files) {
    EpochFeatureMatrix m = read_matrix_binary(p);
    check_compatible(set, m, p);
    set.matrices.push_back(std::move(m));
  }
  return set;
}

std::vector<EpochFeatureMatrix> non_empty(std::vector<EpochFeatureMatrix> v) {
  std::erase_if(v, [](const EpochFeatureMatrix& m) { return m.rows() == 0; });
  return v;
}

}  // namespace

// ---- commands --------------------------------------------------------------

int cmd_inspect(const fs::path& edf) {
  const EdfHeader h = read_edf_header(edf);
  json j;
  j["path"] = edf.string();
  j["version"] = h.version;
  j["patient_id"] = h.patient_id;
  j["recording_id"] = h.recording_id;
  j["start_date"] = h.start_date;
  j["start_time"] = h.start_time;
  j["header_bytes"] = h.header_bytes;
  j["reserved"] = h.reserved;
  j["edf_plus"] = h.is_edf_plus();
  j["discontinuous"] = h.is_discontinuous();
  j["n_data_records"] = h.n_data_records;
  j["record_duration_s"] = h.record_duration_s.to_string();
  j["n_signals"] = h.n_signals();
  json signals = json::array();
  for (std::size_t i = 0; i < h.signals.size(); ++i) signals.push_back(signal_json(h.signals[i], h, i));
  j["signals"] = signals;
  std::cout << j.dump(2) << std::endl;
  return kExitOk;
}

int cmd_extract(const RunConfig& cfg, bool force) {
  if (cfg.recordings.empty()) throw UsageError("dataset lists no recordings");
  Stopwatch total;
  const std::size_t n = cfg.recordings.size();
  const int outer = std::min<int>(cfg.parallelism, static_cast<int>(n));
  const int inner = std::max(1, cfg.parallelism / std::max(1, outer));
  std::mutex mu;
  int failed = 0, extracted = 0, skipped = 0;
  log_event("info", "extract.start",
            {{"recordings", n}, {"config_digest", cfg.config_digest}, {"workers", cfg.parallelism}});
  parallel_for(n, outer, [&](std::size_t i) {
    const auto& src = cfg.recordings[i];
    try {
      const Outcome o = extract_one(cfg, src, force, inner);
      std::lock_guard lock(mu);
      (o == Outcome::kSkipped ? skipped : extracted) += 1;
    } catch (const std::exception& e) {
      log_event("error", "extract.failed", {{"recording", src.recording_id}, {"error", e.what()}});
      std::lock_guard lock(mu);
      ++failed;
    }
  });
  log_event("info", "extract.summary",
            {{"extracted", extracted},
             {"skipped", skipped},
             {"failed", failed},
             {"wall_s", total.seconds()}});
  return failed > 0 ? kExitDataFailure : kExitOk;
}

int cmd_train(const RunConfig& cfg, const std::optional<fs::path>& model_out) {
  Stopwatch lap;
  LoadedSet set = load_dataset(cfg);
  auto mats = non_empty(std::move(set.matrices));
  if (mats.empty()) throw Error("no labelled epochs to train on");
  Eigen::Index rows = 0;
  for (const auto& m : mats) rows += m.rows();
  RowMatrix x(rows, mats.front().values.cols());
  std::vector<SleepStage> y;
  std::set<std::string> subjects;
  Eigen::Index at = 0;
  for (const auto& m : mats) {
    x.middleRows(at, m.rows()) = m.values;
    at += m.rows();
    y.insert(y.end(), m.stages.begin(), m.stages.end());
    subjects.insert(m.subject_id);
  }
  const double t_load = lap.lap();
  auto model = LinearPipelineModel::fit(x, y, set.schema_hash, cfg.model);
  const double t_fit = lap.lap();
  model.training_meta()["dataset"] = cfg.dataset_name;
  model.training_meta()["fold"] = "all";
  model.training_meta()["config_digest"] = cfg.config_digest;
  model.training_meta()["extraction_settings_digest"] = set.settings_digest;
  model.training_meta()["n_rows"] = std::to_string(rows);
  model.training_meta()["n_subjects"] = std::to_string(subjects.size());
  model.training_meta()["n_recordings"] = std::to_string(mats.size());
  model.training_meta()["seed"] = std::to_string(cfg.seed);
  const fs::path out = model_out.value_or(cfg.output_dir / "model.json");
  write_text(out, model.to_json() + "\n");
  log_event("info", "train.done",
            {{"model", out.string()},
             {"rows", rows},
             {"iterations", model.logistic().iterations},
             {"converged", model.logistic().converged},
             {"wall_s", {{"load", t_load}, {"fit", t_fit}, {"write", lap.lap()}}}});
  return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg) {
  Stopwatch lap;
  LoadedSet set = load_dataset(cfg);
  auto eval = non_empty(std::move(set.matrices));
  if (eval.empty()) throw Error("no labelled epochs to evaluate");
  EvaluationResult result;
  const double t_load = lap.lap();
  if (cfg.protocol == "LFS") {
    std::vector<std::string> subjects;
    for (const auto& m : eval) subjects.push_back(m.subject_id);
    const std::size_t distinct = std::set<std::string>(subjects.begin(), subjects.end()).size();
    const int k = cfg.k == 0 ? static_cast<int>(distinct) : cfg.k;
    const FoldPlan plan = grouped_kfold(subjects, k);
    result = run_lfs_cv(eval, plan, cfg.model);
  } else {
    if (cfg.train_features_dir.empty()) throw UsageError("DT needs eval.train_features_dir");
    LoadedSet train = load_directory(cfg.train_features_dir);
    if (train.schema_hash != set.schema_hash || train.settings_digest != set.settings_digest) {
      throw Error("training features in " + cfg.train_features_dir.string() +
                  " were extracted with a different schema or settings");
    }
    DirectTransferOptions dt;
    dt.exclude_subjects = cfg.exclude_subjects;
    dt.allow_overlap = cfg.allow_overlap;
    result = run_dt(non_empty(std::move(train.matrices)), eval, cfg.model, dt);
  }
  const double t_fit = lap.lap();

  json report;
  report["dataset"] = cfg.dataset_name;
  report["protocol"] = result.protocol;
  report["k"] = result.k;
  json folds = json::array();
  for (std::size_t f = 0; f < result.per_fold.size(); ++f) {
    const auto& s = result.folds[f];
    json jf = metrics_json(result.per_fold[f]);
    jf["train_subjects"] = s.train_subjects;
    jf["test_subjects"] = s.test_subjects;
    jf["train_rows"] = s.train_rows;
    jf["test_rows"] = s.test_rows;
    jf["optimizer_iterations"] = s.optimizer_iterations;
    jf["optimizer_converged"] = s.optimizer_converged;
    folds.push_back(std::move(jf));
  }
  report["per_fold"] = folds;
  report["pooled"] = metrics_json(result.pooled);
  report["config_digest"] = cfg.config_digest;
  report["schema_hash"] = set.schema_hash;
  report["extraction_settings_digest"] = set.settings_digest;

  std::string pred_csv = "subject_id,recording_id,epoch_index,fold,truth,pred,p_W,p_N1,p_N2,p_N3,p_REM\n";
  for (const auto& r : result.predictions) {
    pred_csv += r.subject_id + "," + r.recording_id + "," + std::to_string(r.epoch_index) + "," +
                std::to_string(r.fold) + "," + std::string(to_string(r.truth)) + "," +
                std::string(to_string(r.pred));
    for (double p : r.proba) pred_csv += "," + num(p);
    pred_csv += "\n";
  }
  write_text(cfg.output_dir / "predictions.csv", pred_csv);
  write_text(cfg.output_dir / "confusion.csv", confusion_csv(result.pooled.confusion));
  for (std::size_t f = 0; f < result.per_fold.size() && result.per_fold.size() > 1; ++f) {
    write_text(cfg.output_dir / "confusion" / ("fold_" + std::to_string(f) + ".csv"),
               confusion_csv(result.per_fold[f].confusion));
  }
  const double t_write = lap.lap();
  report["wall_times"] = {{"load", t_load}, {"fit_and_score", t_fit}, {"write", t_write}};
  write_text(cfg.output_dir / "report.json", report.dump(2) + "\n");
  log_event("info", "evaluate.done",
            {{"protocol", result.protocol},
             {"k", result.k},
             {"epochs", result.pooled.n_epochs},
             {"mf1", result.pooled.mf1},
             {"acc", result.pooled.acc},
             {"kappa", result.pooled.kappa},
             {"wall_s", report["wall_times"]}});
  return kExitOk;
}

int cmd_predict(const RunConfig& cfg, const fs::path& model_path,
                const std::optional<std::string>& recording_id,
                const std::optional<fs::path>& features,
                const std::optional<fs::path>& output) {
  if (recording_id.has_value() == features.has_value()) {
    throw UsageError("predict needs exactly one of --recording or --features");
  }
  Stopwatch lap;
  const auto model = LinearPipelineModel::load(model_path);
  const fs::path in = features.value_or(cfg.features_path(recording_id.value_or("")));
  const EpochFeatureMatrix m = read_matrix_binary(in);
  const auto want = model.training_meta().find("extraction_settings_digest");
  const auto have = m.provenance.find("extraction_settings_digest");
  if (want != model.training_meta().end() &&
      (have == m.provenance.end() || have->second != want->second)) {
    throw Error(in.string() + " was extracted with settings the model was not trained on");
  }
  if (recording_id && (have == m.provenance.end() ||
                       have->second != cfg.extraction_settings_digest())) {
    throw Error(in.string() + " is stale for the current configuration; rerun extract");
  }
  const RowMatrix proba = model.predict_proba(m.values, m.schema.hash());
  const auto pred = argmax_stages(proba);
  std::string csv = "epoch_index,stage,p_W,p_N1,p_N2,p_N3,p_REM\n";
  for (Eigen::Index r = 0; r < proba.rows(); ++r) {
    csv += std::to_string(m.epoch_index[r]) + "," + std::string(to_string(pred[r]));
    for (int k = 0; k < kNumClasses; ++k) csv += "," + num(proba(r, k));
    csv += "\n";
  }
  const fs::path out =
      output.value_or(cfg.output_dir / "predictions" / (m.recording_id + ".csv"));
  write_text(out, csv);
  log_event("info", "predict.done",
            {{"recording", m.recording_id}, {"rows", proba.rows()}, {"output", out.string()},
             {"wall_s", lap.lap()}});
  return kExitOk;
}

int cmd_project(const RunConfig& cfg, const std::optional<fs::path>& output) {
  Stopwatch lap;
  LoadedSet set = load_dataset(cfg);
  auto mats = non_empty(std::move(set.matrices));
  Eigen::Index rows = 0;
  for (const auto& m : mats) rows += m.rows();
  if (rows < 3) throw Error("PCA needs at least three labelled epochs");
  RowMatrix x(rows, mats.front().values.cols());
  Eigen::Index at = 0;
  for (const auto& m : mats) {
    x.middleRows(at, m.rows()) = m.values;
    at += m.rows();
  }
  const auto qt = QuantileTransform::fit(x, cfg.model.n_quantiles, cfg.parallelism);
  const RowMatrix t = qt.apply(x, cfg.parallelism);
  const PcaModel pca = fit_pca(t, 2);
  const RowMatrix coords = pca.project(t);
  std::string csv = "subject_id,recording_id,epoch_index,pc1,pc2,stage\n";
  Eigen::Index r = 0;
  for (const auto& m : mats) {
    for (Eigen::Index i = 0; i < m.rows(); ++i, ++r) {
      csv += m.subject_id + "," + m.recording_id + "," + std::to_string(m.epoch_index[i]) + "," +
             num(coords(r, 0)) + "," + num(coords(r, 1)) + "," +
             std::string(to_string(m.stages[i])) + "\n";
    }
  }
  const fs::path out = output.value_or(cfg.output_dir / "pca.csv");
  write_text(out, csv);
  json meta;
  meta["config_digest"] = cfg.config_digest;
  meta["schema_hash"] = set.schema_hash;
  meta["rows"] = rows;
  meta["explained_variance"] = {pca.explained_variance[0], pca.explained_variance[1]};
  meta["explained_variance_ratio"] = {pca.explained_variance_ratio[0],
                                      pca.explained_variance_ratio[1]};
  auto meta_path = out;
  meta_path.replace_extension(".json");
  write_text(meta_path, meta.dump(2) + "\n");
  log_event("info", "project.done",
            {{"rows", rows}, {"output", out.string()}, {"wall_s", lap.lap()}});
  return kExitOk;
}

}  // namespace somno::cli

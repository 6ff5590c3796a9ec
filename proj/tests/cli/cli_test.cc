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

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "edf_fixture.h"
#include "process.h"
#include "synthetic.h"

namespace somno {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using testing::read_text;
using testing::run_process;
using testing::write_text;

const std::string kCli = SOMNO_CLI_PATH;

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "somno_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "data");
    const auto a = testing::synthetic_hypnogram(40, 1);
    const auto b = testing::synthetic_hypnogram(40, 2);
    testing::write_synthetic_recording(dir_ / "data", "rec_a", "subj_a", a, 1,
                                       testing::HypnogramFormat::kCsv);
    testing::write_synthetic_recording(dir_ / "data", "rec_b", "subj_b", b, 2,
                                       testing::HypnogramFormat::kEdfPlus);
    json cfg = {
        {"dataset",
         {{"name", "cli"},
          {"recordings",
           {{{"psg", "data/rec_a-PSG.edf"},
             {"hypnogram", "data/rec_a-hypnogram.csv"},
             {"subject_id", "subj_a"},
             {"recording_id", "rec_a"}},
            {{"psg", "data/rec_b-PSG.edf"},
             {"hypnogram", "data/rec_b-Hypnogram.edf"},
             {"subject_id", "subj_b"},
             {"recording_id", "rec_b"}}}}}},
        {"features", {{"write_csv", true}}},
        {"eval", {{"protocol", "LFS"}, {"k", 2}}},
        {"output_dir", "out"},
    };
    write_text(config(), cfg.dump(2));
    extract_ = new testing::ProcessResult(run_process({kCli, "extract", "-c", config().string()}));
  }
  static void TearDownTestSuite() {
    delete extract_;
    fs::remove_all(dir_);
  }

  static fs::path config() { return dir_ / "config.json"; }
  static fs::path out() { return dir_ / "out"; }

  static fs::path dir_;
  static testing::ProcessResult* extract_;
};
fs::path CliTest::dir_;
testing::ProcessResult* CliTest::extract_ = nullptr;

TEST_F(CliTest, InspectPrintsHeaderJson) {
  const auto r = run_process({kCli, "inspect", (dir_ / "data" / "rec_a-PSG.edf").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["signals"].size(), 4u);
  EXPECT_EQ(j["signals"][0]["label"], "EEG Fpz-Cz");
  EXPECT_EQ(j["n_data_records"], 40);
}

TEST_F(CliTest, InspectRejectsForeignFiles) {
  write_text(dir_ / "junk.edf", "this is not an EDF file at all");
  write_text(dir_ / "empty.edf", "");
  for (const char* name : {"junk.edf", "empty.edf", "missing.edf"}) {
    const auto r = run_process({kCli, "inspect", (dir_ / name).string()});
    EXPECT_EQ(r.exit_code, 2) << name;
    EXPECT_FALSE(r.err.empty());
  }
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run_process({kCli}).exit_code, 2);
  EXPECT_EQ(run_process({kCli, "bogus"}).exit_code, 2);
  EXPECT_EQ(run_process({kCli, "train"}).exit_code, 2);
  write_text(dir_ / "bad.json", R"({"dataset": {"nmae": "x"}})");
  EXPECT_EQ(run_process({kCli, "train", "-c", (dir_ / "bad.json").string()}).exit_code, 2);
  EXPECT_EQ(run_process({kCli, "train", "-c", config().string(), "--set", "eval.protocol=XY"})
                .exit_code,
            2);
}

TEST_F(CliTest, ExtractWritesMatricesAndLabels) {
  ASSERT_EQ(extract_->exit_code, 0) << extract_->err;
  for (const char* rid : {"rec_a", "rec_b"}) {
    const auto side = json::parse(read_text(out() / "features" / (std::string(rid) + ".json")));
    EXPECT_EQ(side["cols"], 1048);
    EXPECT_EQ(side["columns"].size(), 1048u);
    const auto rows = side["rows"].get<std::int64_t>();
    EXPECT_GT(rows, 30);
    EXPECT_EQ(fs::file_size(out() / "features" / (std::string(rid) + ".f64")),
              static_cast<std::uintmax_t>(rows) * 1048 * 8);
    const auto labels = json::parse(read_text(out() / "labels" / (std::string(rid) + ".json")));
    EXPECT_EQ(labels["n_rows"], rows);
    EXPECT_EQ(lines(read_text(out() / "features" / (std::string(rid) + ".csv"))).size(),
              static_cast<std::size_t>(rows) + 1);
  }
}

TEST_F(CliTest, ExtractSkipsCurrentOutputs) {
  ASSERT_EQ(extract_->exit_code, 0);
  const auto before = fs::last_write_time(out() / "features" / "rec_a.f64");
  const auto again = run_process({kCli, "extract", "-c", config().string()});
  EXPECT_EQ(again.exit_code, 0) << again.err;
  EXPECT_NE(again.err.find("extract.skip"), std::string::npos);
  EXPECT_EQ(fs::last_write_time(out() / "features" / "rec_a.f64"), before);
}

TEST_F(CliTest, ExtractFailsOnCorruptInput) {
  const auto bad_dir = dir_ / "corrupt";
  fs::create_directories(bad_dir);
  write_text(bad_dir / "x-PSG.edf", std::string(300, '0'));
  write_text(bad_dir / "x-hypnogram.csv", "epoch_index,stage\n0,W\n");
  json cfg = {{"dataset",
               {{"recordings", {{{"psg", "x-PSG.edf"}, {"hypnogram", "x-hypnogram.csv"}}}}}},
              {"output_dir", "out"}};
  write_text(bad_dir / "config.json", cfg.dump());
  const auto r = run_process({kCli, "extract", "-c", (bad_dir / "config.json").string()});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("extract.failed"), std::string::npos);
}

TEST_F(CliTest, TrainEvaluatePredictProject) {
  ASSERT_EQ(extract_->exit_code, 0);
  const auto train = run_process({kCli, "train", "-c", config().string()});
  ASSERT_EQ(train.exit_code, 0) << train.err;
  const auto model = json::parse(read_text(out() / "model.json"));
  EXPECT_EQ(model["weights"].size(), 5u);
  EXPECT_EQ(model["weights"][0].size(), 1048u);

  const auto eval = run_process({kCli, "evaluate", "-c", config().string()});
  ASSERT_EQ(eval.exit_code, 0) << eval.err;
  const auto report = json::parse(read_text(out() / "report.json"));
  for (const char* key : {"dataset", "protocol", "k", "per_fold", "pooled", "config_digest",
                          "schema_hash", "extraction_settings_digest", "wall_times"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_EQ(report["per_fold"].size(), 2u);
  for (const char* key : {"mf1", "acc", "kappa", "log_loss", "per_class_f1", "confusion"}) {
    EXPECT_TRUE(report["pooled"].contains(key)) << key;
  }
  const auto side = json::parse(read_text(out() / "features" / "rec_a.json"));
  const auto side_b = json::parse(read_text(out() / "features" / "rec_b.json"));
  const auto total = side["rows"].get<std::size_t>() + side_b["rows"].get<std::size_t>();
  EXPECT_EQ(lines(read_text(out() / "predictions.csv")).size(), total + 1);
  EXPECT_EQ(lines(read_text(out() / "confusion.csv")).size(), 6u);
  EXPECT_TRUE(fs::exists(out() / "confusion" / "fold_1.csv"));

  const auto pred = run_process({kCli, "predict", "-c", config().string(), "-m",
                                 (out() / "model.json").string(), "-r", "rec_a"});
  ASSERT_EQ(pred.exit_code, 0) << pred.err;
  const auto rows = lines(read_text(out() / "predictions" / "rec_a.csv"));
  ASSERT_EQ(rows.size(), side["rows"].get<std::size_t>() + 1);
  EXPECT_EQ(rows[0], "epoch_index,stage,p_W,p_N1,p_N2,p_N3,p_REM");

  const auto pred_f = run_process({kCli, "predict", "-c", config().string(), "-m",
                                   (out() / "model.json").string(), "-f",
                                   (out() / "features" / "rec_a.f64").string(), "-o",
                                   (dir_ / "direct.csv").string()});
  ASSERT_EQ(pred_f.exit_code, 0) << pred_f.err;
  EXPECT_EQ(read_text(dir_ / "direct.csv"), read_text(out() / "predictions" / "rec_a.csv"));
  EXPECT_EQ(run_process({kCli, "predict", "-c", config().string(), "-m",
                         (out() / "model.json").string()})
                .exit_code,
            2);

  const auto proj = run_process({kCli, "project", "-c", config().string()});
  ASSERT_EQ(proj.exit_code, 0) << proj.err;
  const auto pca = lines(read_text(out() / "pca.csv"));
  ASSERT_EQ(pca.size(), total + 1);
  EXPECT_EQ(pca[0], "subject_id,recording_id,epoch_index,pc1,pc2,stage");
}

TEST_F(CliTest, PredictRefusesIncompatibleSettings) {
  ASSERT_EQ(extract_->exit_code, 0);
  if (!fs::exists(out() / "model.json")) {
    ASSERT_EQ(run_process({kCli, "train", "-c", config().string()}).exit_code, 0);
  }
  // Features on disk no longer match the configured settings.
  const auto stale = run_process({kCli, "predict", "-c", config().string(), "--set",
                                  "features.higuchi_kmax=8", "-m",
                                  (out() / "model.json").string(), "-r", "rec_a"});
  EXPECT_EQ(stale.exit_code, 1);
  EXPECT_NE(stale.err.find("stale"), std::string::npos);

  // A feature file extracted under other settings than the model.
  const auto copy = dir_ / "other.f64";
  fs::copy_file(out() / "features" / "rec_a.f64", copy, fs::copy_options::overwrite_existing);
  auto side = json::parse(read_text(out() / "features" / "rec_a.json"));
  side["provenance"]["extraction_settings_digest"] = "different";
  write_text(dir_ / "other.json", side.dump());
  const auto r = run_process({kCli, "predict", "-c", config().string(), "-m",
                              (out() / "model.json").string(), "-f", copy.string(), "-o",
                              (dir_ / "x.csv").string()});
  EXPECT_EQ(r.exit_code, 1);
}

}  // namespace
}  // namespace somno
